//! Closure systems on a small atom universe.
//!
//! A base is determined, as far as support goes, by the sets of atoms closed
//! under its rules. Those sets always form a Moore family: they contain the
//! full universe and are closed under intersection. Extending a base shrinks
//! its family, and every Moore subfamily arises from some extension, so the
//! quantification over extensions becomes a quantification over subfamilies.

use std::collections::HashMap;

/// A set of atoms, bit `i` standing for the `i`th atom of the universe.
pub type AtomSet = u32;

/// Index of a Moore family in [`Lattice::families`].
pub type FamilyId = usize;

/// A set of families, indexed by [`FamilyId`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FamilySet {
    words: Vec<u64>,
}

impl FamilySet {
    pub fn empty(len: usize) -> FamilySet {
        FamilySet {
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub fn full(len: usize) -> FamilySet {
        let mut s = FamilySet::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: FamilyId) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: FamilyId) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn and(&self, other: &FamilySet) -> FamilySet {
        FamilySet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn and_assign(&mut self, other: &FamilySet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Whether `self ∩ yes \ no` is empty.
    pub fn meets_without(&self, yes: &FamilySet, no: &FamilySet) -> bool {
        self.words
            .iter()
            .zip(&yes.words)
            .zip(&no.words)
            .any(|((s, y), n)| s & y & !n != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &FamilySet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = FamilyId> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| k * 64 + b)
        })
    }
}

#[derive(Debug)]
pub struct Lattice {
    atoms: usize,
    /// Each family as a bitmask over the `2^atoms` atom sets, ordered by
    /// number of members, then by mask.
    families: Vec<u64>,
    index: HashMap<u64, FamilyId>,
    covers: Vec<Vec<FamilyId>>,
    subs: Vec<FamilySet>,
}

impl Lattice {
    /// All Moore families on `atoms` atoms. Only small universes are
    /// feasible: 1, 2, 7, 61 and 2480 families for 0 to 4 atoms.
    pub fn new(atoms: usize) -> Lattice {
        assert!(
            atoms <= 4,
            "closure-system enumeration is limited to four atoms"
        );
        let subsets = 1usize << atoms;
        let full_set: usize = subsets - 1;
        let mut families: Vec<u64> = Vec::new();
        // Families are masks over the atom sets; for four atoms that is a
        // 16-bit mask, so plain enumeration suffices.
        for fam in 0u64..(1u64 << subsets) {
            if fam >> full_set & 1 == 0 {
                continue;
            }
            let members: Vec<usize> = (0..subsets).filter(|&s| fam >> s & 1 == 1).collect();
            let closed = members
                .iter()
                .all(|&a| members.iter().all(|&b| fam >> (a & b) & 1 == 1));
            if closed {
                families.push(fam);
            }
        }
        families.sort_by_key(|&f| (f.count_ones(), f));
        let index: HashMap<u64, FamilyId> =
            families.iter().enumerate().map(|(i, &f)| (f, i)).collect();

        let covers: Vec<Vec<FamilyId>> = families
            .iter()
            .map(|&fam| {
                members_of(fam, subsets)
                    .filter(|&s| s != full_set && is_meet_irreducible(fam, s, subsets))
                    .map(|s| index[&(fam & !(1 << s))])
                    .collect()
            })
            .collect();

        let mut subs: Vec<FamilySet> = Vec::with_capacity(families.len());
        for (i, cs) in covers.iter().enumerate() {
            let mut s = FamilySet::empty(families.len());
            s.insert(i);
            for &c in cs {
                for (w, cw) in s.words.iter_mut().zip(&subs[c].words) {
                    *w |= cw;
                }
            }
            subs.push(s);
        }

        Lattice {
            atoms,
            families,
            index,
            covers,
            subs,
        }
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn full_set(&self) -> AtomSet {
        ((1u64 << self.atoms) - 1) as AtomSet
    }

    /// The family `{𝔸}`: every atom derivable.
    pub fn bottom(&self) -> FamilyId {
        0
    }

    /// The family of all atom sets: the empty base.
    pub fn top(&self) -> FamilyId {
        self.families.len() - 1
    }

    pub fn members(&self, f: FamilyId) -> impl Iterator<Item = AtomSet> + '_ {
        members_of(self.families[f], 1 << self.atoms).map(|s| s as AtomSet)
    }

    pub fn size(&self, f: FamilyId) -> usize {
        self.families[f].count_ones() as usize
    }

    pub fn id_of_members(&self, members: impl IntoIterator<Item = AtomSet>) -> Option<FamilyId> {
        let mask = members.into_iter().fold(0u64, |m, s| m | 1 << s);
        self.index.get(&mask).copied()
    }

    /// The family `{s, 𝔸}`.
    pub fn pair(&self, s: AtomSet) -> FamilyId {
        self.id_of_members([s, self.full_set()])
            .expect("two-element chains are closed")
    }

    /// Families obtained by removing one member: the maximal proper subfamilies.
    pub fn lower_covers(&self, f: FamilyId) -> &[FamilyId] {
        &self.covers[f]
    }

    /// All subfamilies of `f`, including `f`.
    pub fn subfamilies(&self, f: FamilyId) -> &FamilySet {
        &self.subs[f]
    }

    pub fn empty_set(&self) -> FamilySet {
        FamilySet::empty(self.len())
    }

    pub fn full_family_set(&self) -> FamilySet {
        FamilySet::full(self.len())
    }

    /// Families in which every member contains all atoms of `required`.
    pub fn all_contain(&self, required: AtomSet) -> FamilySet {
        let mut out = self.empty_set();
        for f in 0..self.len() {
            if self.members(f).all(|s| s & required == required) {
                out.insert(f);
            }
        }
        out
    }

    /// Families `F` such that every subfamily in `yes` is also in `no`.
    pub fn implication(&self, yes: &FamilySet, no: &FamilySet) -> FamilySet {
        let mut out = self.empty_set();
        for f in 0..self.len() {
            let here = !yes.contains(f) || no.contains(f);
            if here && self.covers[f].iter().all(|&c| out.contains(c)) {
                out.insert(f);
            }
        }
        out
    }

    /// Closed sets of the rules `(premises, conclusion)`.
    pub fn family_of_rules(&self, rules: &[(AtomSet, AtomSet)]) -> FamilyId {
        let members = (0..1u32 << self.atoms)
            .filter(|&s| rules.iter().all(|&(p, c)| p & s != p || s & (1 << c) != 0));
        self.id_of_members(members)
            .expect("closed sets of rules form a Moore family")
    }

    /// A minimal rule set whose closed sets are exactly `f`: `P => c`
    /// whenever `c` is in the closure of `P` but of no proper subset of `P`.
    pub fn canonical_rules(&self, f: FamilyId) -> Vec<(AtomSet, AtomSet)> {
        let closure = |p: AtomSet| {
            self.members(f)
                .filter(|&s| s & p == p)
                .fold(self.full_set(), |acc, s| acc & s)
        };
        let mut out = Vec::new();
        for c in 0..self.atoms as u32 {
            let forcing: Vec<AtomSet> = (0..1u32 << self.atoms)
                .filter(|&p| p & (1 << c) == 0 && closure(p) & (1 << c) != 0)
                .collect();
            for &p in &forcing {
                if !forcing.iter().any(|&q| q != p && q & p == q) {
                    out.push((p, c));
                }
            }
        }
        out
    }
}

fn members_of(fam: u64, subsets: usize) -> impl Iterator<Item = usize> {
    (0..subsets).filter(move |&s| fam >> s & 1 == 1)
}

/// `s` is not the intersection of the members strictly above it.
fn is_meet_irreducible(fam: u64, s: usize, subsets: usize) -> bool {
    let above = members_of(fam, subsets)
        .filter(|&t| t != s && t & s == s)
        .fold(subsets - 1, |acc, t| acc & t);
    above != s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moore_family_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| Lattice::new(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 61, 2480]);
    }

    #[test]
    fn covers_remove_one_member() {
        let l = Lattice::new(3);
        for f in 0..l.len() {
            for &c in l.lower_covers(f) {
                assert_eq!(l.size(c) + 1, l.size(f));
                assert!(l.members(c).all(|s| l.members(f).any(|t| t == s)));
            }
        }
    }

    #[test]
    fn subfamilies_are_exactly_the_contained_families() {
        let l = Lattice::new(3);
        for f in 0..l.len() {
            let fm: Vec<AtomSet> = l.members(f).collect();
            for g in 0..l.len() {
                let inside = l.members(g).all(|s| fm.contains(&s));
                assert_eq!(l.subfamilies(f).contains(g), inside, "{f} {g}");
            }
        }
    }

    #[test]
    fn canonical_rules_reproduce_the_family() {
        for n in 0..=3 {
            let l = Lattice::new(n);
            for f in 0..l.len() {
                assert_eq!(l.family_of_rules(&l.canonical_rules(f)), f);
            }
        }
    }

    #[test]
    fn extremes() {
        let l = Lattice::new(2);
        assert_eq!(l.members(l.bottom()).collect::<Vec<_>>(), vec![0b11]);
        assert_eq!(l.size(l.top()), 4);
        assert_eq!(l.family_of_rules(&[]), l.top());
        assert_eq!(l.family_of_rules(&[(0, 0), (0, 1)]), l.bottom());
    }
}
