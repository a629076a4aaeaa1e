//! Abelian sections `S/T` with canonical coset representatives.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{is_power_of, ElemId, FiniteGroup, Subgroup};

/// A coset of an [`AbelianSection`], by index into its representative list.
/// Index 0 is always the trivial coset `T`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Coset(pub u32);

impl Coset {
    pub const TRIVIAL: Coset = Coset(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct AbelianSection {
    top: Subgroup,
    bottom: Subgroup,
    reps: Vec<ElemId>,
    coset_of: HashMap<ElemId, Coset>,
    table: Vec<Coset>,
    orders: Vec<u32>,
}

impl AbelianSection {
    /// Builds `top / bottom`; `bottom` must be normal in `top` with abelian quotient.
    pub fn new(g: &FiniteGroup, top: &Subgroup, bottom: &Subgroup) -> Result<Self> {
        if !bottom.is_subset(top) {
            return Err(Error::Precondition("bottom of a section must lie in its top".into()));
        }
        if !g.is_normal(top, bottom) {
            return Err(Error::Precondition("bottom of a section must be normal in its top".into()));
        }
        let comm = g.commutator_subgroup(top);
        if !comm.is_subset(bottom) {
            return Err(Error::Precondition("section is not abelian".into()));
        }

        // Elements are scanned in increasing order, so the first element
        // seen in each coset is its least one.
        let mut reps = Vec::new();
        let mut coset_of = HashMap::with_capacity(top.order());
        for &x in top.elements() {
            if coset_of.contains_key(&x) {
                continue;
            }
            let c = Coset(reps.len() as u32);
            reps.push(x);
            for &t in bottom.elements() {
                coset_of.insert(g.mul(x, t), c);
            }
        }
        let n = reps.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &reps {
            for &b in &reps {
                table.push(coset_of[&g.mul(a, b)]);
            }
        }
        let mut orders = Vec::with_capacity(n);
        for i in 0..n {
            let c = Coset(i as u32);
            let mut k = 1;
            let mut acc = c;
            while acc != Coset::TRIVIAL {
                acc = table[acc.index() * n + i];
                k += 1;
            }
            orders.push(k);
        }
        Ok(AbelianSection { top: top.clone(), bottom: bottom.clone(), reps, coset_of, table, orders })
    }

    pub fn top(&self) -> &Subgroup {
        &self.top
    }

    pub fn bottom(&self) -> &Subgroup {
        &self.bottom
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn cosets(&self) -> impl Iterator<Item = Coset> {
        (0..self.reps.len() as u32).map(Coset)
    }

    /// Least element of the coset.
    pub fn representative(&self, c: Coset) -> ElemId {
        self.reps[c.index()]
    }

    /// `ψ(x) = xT`.
    pub fn project(&self, x: ElemId) -> Result<Coset> {
        self.coset_of.get(&x).copied().ok_or_else(|| Error::NotMember(format!("element id {} not in section top", x.0)))
    }

    pub fn mul(&self, a: Coset, b: Coset) -> Coset {
        self.table[a.index() * self.reps.len() + b.index()]
    }

    pub fn pow(&self, a: Coset, n: u64) -> Coset {
        let n = n % self.orders[a.index()] as u64;
        (0..n).fold(Coset::TRIVIAL, |acc, _| self.mul(acc, a))
    }

    pub fn coset_order(&self, a: Coset) -> u32 {
        self.orders[a.index()]
    }

    pub fn product(&self, cosets: impl IntoIterator<Item = Coset>) -> Coset {
        cosets.into_iter().fold(Coset::TRIVIAL, |acc, c| self.mul(acc, c))
    }

    /// Subgroup of the section generated by `gens`, sorted.
    pub fn span(&self, gens: &[Coset]) -> Vec<Coset> {
        let mut found = BTreeSet::from([Coset::TRIVIAL]);
        let mut frontier = vec![Coset::TRIVIAL];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if found.insert(y) {
                    frontier.push(y);
                }
            }
        }
        found.into_iter().collect()
    }

    /// `Ω₁(S/T)`: the subgroup generated by cosets of order dividing `p`.
    pub fn omega_1(&self, p: u64) -> Result<Vec<Coset>> {
        if !is_power_of(self.order() as u64, p) {
            return Err(Error::Precondition(format!("section of order {} is not a {p}-group", self.order())));
        }
        let gens: Vec<Coset> = self.cosets().filter(|&c| self.coset_order(c) as u64 <= p).collect();
        Ok(self.span(&gens))
    }

    /// Whether the distinct cosets in `cosets` are linearly independent over
    /// `F_p`, i.e. generate a subgroup of order `p^k`. Every coset must be a
    /// nontrivial element of `Ω₁`.
    pub fn linearly_independent(&self, cosets: &[Coset], p: u64) -> Result<bool> {
        let distinct: BTreeSet<Coset> = cosets.iter().copied().collect();
        for &c in &distinct {
            if c == Coset::TRIVIAL {
                return Err(Error::Precondition("trivial coset in independence test".into()));
            }
            if self.coset_order(c) as u64 != p {
                return Err(Error::Precondition(format!("coset of order {} lies outside Ω₁", self.coset_order(c))));
            }
        }
        let gens: Vec<Coset> = distinct.iter().copied().collect();
        let span = self.span(&gens);
        Ok(span.len() as u64 == p.pow(gens.len() as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn trivial_section() {
        let g = catalog::quaternion8().unwrap();
        let s = g.whole();
        let a = AbelianSection::new(&g, &s, &s).unwrap();
        assert_eq!(a.order(), 1);
        assert_eq!(a.omega_1(2).unwrap(), vec![Coset::TRIVIAL]);
        assert!(a.linearly_independent(&[], 2).unwrap());
    }

    #[test]
    fn quaternion_mod_center() {
        let g = catalog::quaternion8().unwrap();
        let s = g.whole();
        let z = g.center(&s);
        assert_eq!(z.order(), 2);
        let a = AbelianSection::new(&g, &s, &z).unwrap();
        assert_eq!(a.order(), 4);
        assert!(a.cosets().all(|c| a.coset_order(c) <= 2));
        assert_eq!(a.omega_1(2).unwrap().len(), 4);
        let nontrivial: Vec<Coset> = a.cosets().skip(1).collect();
        assert_eq!(nontrivial.len(), 3);
        assert!(!a.linearly_independent(&nontrivial, 2).unwrap());
        assert!(a.linearly_independent(&nontrivial[..2], 2).unwrap());
        assert!(a.linearly_independent(&[nontrivial[0], nontrivial[0]], 2).unwrap());
        assert!(a.linearly_independent(&[Coset::TRIVIAL], 2).is_err());
    }

    #[test]
    fn dihedral_mod_rotations() {
        let g = catalog::dihedral(8).unwrap();
        let s = g.whole();
        let r = g.ids().find(|&x| g.element_order(x) == 4).unwrap();
        let c4 = g.closure(&[r]);
        let a = AbelianSection::new(&g, &s, &c4).unwrap();
        assert_eq!(a.order(), 2);
    }

    #[test]
    fn cyclic_section_omega() {
        let g = catalog::cyclic(4).unwrap();
        let s = g.whole();
        let a = AbelianSection::new(&g, &s, &g.trivial()).unwrap();
        let om = a.omega_1(2).unwrap();
        assert_eq!(om.len(), 2);
        let gen = a.cosets().find(|&c| a.coset_order(c) == 4).unwrap();
        assert!(a.linearly_independent(&[gen], 2).is_err());
    }

    #[test]
    fn rejects_bad_sections() {
        let g = catalog::symmetric(4).unwrap();
        let s = g.whole();
        // nonabelian quotient
        assert!(AbelianSection::new(&g, &s, &g.trivial()).is_err());
        // not normal
        let t = g.closure(&[g.require(&"(0,1)".parse::<crate::Permutation>().unwrap().shifted(0, 4)).unwrap()]);
        assert!(AbelianSection::new(&g, &s, &t).is_err());
    }

    #[test]
    fn representatives_are_least_in_coset() {
        let g = catalog::dihedral(16).unwrap();
        let s = g.whole();
        let z = g.center(&s);
        let a = AbelianSection::new(&g, &s, &g.commutator_subgroup(&s)).unwrap();
        for c in a.cosets() {
            let rep = a.representative(c);
            for &x in s.elements() {
                if a.project(x).unwrap() == c {
                    assert!(rep <= x);
                }
            }
        }
        assert!(AbelianSection::new(&g, &s, &z).is_err());
    }
}
