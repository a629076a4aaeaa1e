//! Permutation groups with every element enumerated.
//!
//! Elements are addressed by [`ElemId`], their position in the
//! lexicographically sorted element list, so `ElemId(0)` is always the
//! identity and "least element" means least permutation. Subgroups are
//! plain sorted sets of ids; every operation takes the ambient
//! [`FiniteGroup`] explicitly.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default bound on the number of enumerated elements.
pub const DEFAULT_SIZE_LIMIT: usize = 100_000;

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 2048;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub struct FiniteGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    lookup: HashMap<Permutation, ElemId>,
    inverses: Vec<ElemId>,
    orders: Vec<u32>,
    table: Option<Vec<ElemId>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    pub fn from_generators(name: impl Into<String>, degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::with_limit(name, degree, generators, DEFAULT_SIZE_LIMIT)
    }

    pub fn with_limit(
        name: impl Into<String>,
        degree: usize,
        generators: Vec<Permutation>,
        limit: usize,
    ) -> Result<Self> {
        let name = name.into();
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }

        // Closure under right multiplication by the generators.
        let identity = Permutation::identity(degree);
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        seen.insert(identity.clone(), ());
        let mut found = vec![identity];
        let mut head = 0;
        while head < found.len() {
            let x = found[head].clone();
            head += 1;
            for g in &generators {
                let y = x.compose(g);
                if !seen.contains_key(&y) {
                    if found.len() >= limit {
                        return Err(Error::SizeLimit { what: format!("closure of {name}"), limit });
                    }
                    seen.insert(y.clone(), ());
                    found.push(y);
                }
            }
        }
        found.sort();

        let lookup: HashMap<Permutation, ElemId> =
            found.iter().enumerate().map(|(i, p)| (p.clone(), ElemId(i as u32))).collect();
        let inverses = found.iter().map(|p| lookup[&p.inverse()]).collect();
        let orders = found.iter().map(|p| p.order() as u32).collect();

        let mut group = FiniteGroup { name, degree, generators, elements: found, lookup, inverses, orders, table: None };
        if group.order() <= TABLE_LIMIT {
            group.table = Some(group.build_table());
        }
        Ok(group)
    }

    /// Cayley table filled row by row along a breadth-first spanning tree
    /// of the right Cayley graph, so only `n * |gens|` permutation products
    /// are hashed.
    fn build_table(&self) -> Vec<ElemId> {
        let n = self.order();
        let gens: Vec<ElemId> = self.generators.iter().map(|g| self.lookup[g]).collect();
        let right: Vec<Vec<ElemId>> = (0..n)
            .map(|x| gens.iter().map(|&g| self.lookup[&self.elements[x].compose(&self.elements[g.index()])]).collect())
            .collect();

        // parent[b] = (b', k) with b = b' * gens[k]
        let mut order = Vec::with_capacity(n);
        let mut parent = vec![None; n];
        let mut visited = vec![false; n];
        visited[0] = true;
        order.push(0usize);
        let mut head = 0;
        while head < order.len() {
            let b = order[head];
            head += 1;
            for (k, &y) in right[b].iter().enumerate() {
                if !visited[y.index()] {
                    visited[y.index()] = true;
                    parent[y.index()] = Some((b, k));
                    order.push(y.index());
                }
            }
        }

        let mut table = vec![ElemId(0); n * n];
        for a in 0..n {
            let row = &mut table[a * n..(a + 1) * n];
            row[0] = ElemId(a as u32);
            for &b in &order[1..] {
                let (pb, k) = parent[b].expect("spanning tree covers the group");
                row[b] = right[row[pb].index()][k];
            }
        }
        table
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.elements.len() as u32).map(ElemId)
    }

    pub fn perm(&self, x: ElemId) -> &Permutation {
        &self.elements[x.index()]
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElemId> {
        self.lookup.get(p).copied()
    }

    pub fn require(&self, p: &Permutation) -> Result<ElemId> {
        self.id_of(p).ok_or_else(|| Error::NotMember(p.to_string()))
    }

    pub fn label(&self, x: ElemId) -> String {
        self.perm(x).to_string()
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.table {
            Some(t) => t[a.index() * self.elements.len() + b.index()],
            None => self.lookup[&self.elements[a.index()].compose(&self.elements[b.index()])],
        }
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverses[a.index()]
    }

    pub fn pow(&self, a: ElemId, n: u64) -> ElemId {
        let n = n % self.orders[a.index()] as u64;
        let mut acc = ElemId::IDENTITY;
        for _ in 0..n {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `x^g = g⁻¹ x g`.
    pub fn conj(&self, x: ElemId, g: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: ElemId, y: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn element_order(&self, x: ElemId) -> u32 {
        self.orders[x.index()]
    }

    pub fn element_order_of(&self, p: &Permutation) -> Result<u32> {
        Ok(self.element_order(self.require(p)?))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.order(), self.ids().collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted(self.order(), vec![ElemId::IDENTITY])
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[ElemId]) -> Subgroup {
        let n = self.order();
        let mut mask = FixedBitSet::with_capacity(n);
        mask.insert(0);
        let mut found = vec![ElemId::IDENTITY];
        let mut head = 0;
        while head < found.len() {
            let x = found[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !mask.contains(y.index()) {
                    mask.insert(y.index());
                    found.push(y);
                }
            }
        }
        found.sort_unstable();
        Subgroup { elements: found, mask }
    }

    /// `⟨base, extra⟩`.
    pub fn join_elements(&self, base: &Subgroup, extra: &[ElemId]) -> Subgroup {
        let mut gens = self.generating_set(base);
        gens.extend_from_slice(extra);
        self.closure(&gens)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.join_elements(a, &self.generating_set(b))
    }

    /// Greedy generating set: scan elements in increasing order and keep each
    /// one not already in the span of those kept. Deterministic.
    pub fn generating_set(&self, h: &Subgroup) -> Vec<ElemId> {
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for &x in h.elements() {
            if span.order() == h.order() {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// `<g1,g2,...>` over the greedy generating set, in cycle notation.
    pub fn subgroup_label(&self, h: &Subgroup) -> String {
        let gens: Vec<String> = self.generating_set(h).into_iter().map(|x| self.label(x)).collect();
        format!("<{}>", gens.join(","))
    }

    /// Checks that `elements` is a subgroup and wraps it.
    pub fn subgroup_from_elements(&self, mut elements: Vec<ElemId>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|x| x.index() >= self.order()) {
            return Err(Error::Precondition("element id out of range".into()));
        }
        let h = Subgroup::from_sorted(self.order(), elements);
        if !h.contains(ElemId::IDENTITY) {
            return Err(Error::Precondition("subset lacks the identity".into()));
        }
        for &a in h.elements() {
            for &b in h.elements() {
                if !h.contains(self.mul(a, self.inv(b))) {
                    return Err(Error::Precondition("subset is not closed".into()));
                }
            }
        }
        Ok(h)
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: ElemId) -> Subgroup {
        let mut els: Vec<ElemId> = h.elements().iter().map(|&x| self.conj(x, g)).collect();
        els.sort_unstable();
        Subgroup::from_sorted(self.order(), els)
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup::from_sorted(self.order(), a.elements().iter().copied().filter(|&x| b.contains(x)).collect())
    }

    /// `C_within(xs)`.
    pub fn centralizer(&self, within: &Subgroup, xs: &[ElemId]) -> Subgroup {
        let els = within
            .elements()
            .iter()
            .copied()
            .filter(|&g| xs.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect();
        Subgroup::from_sorted(self.order(), els)
    }

    pub fn centralizer_of_subgroup(&self, within: &Subgroup, h: &Subgroup) -> Subgroup {
        self.centralizer(within, &self.generating_set(h))
    }

    pub fn center(&self, h: &Subgroup) -> Subgroup {
        self.centralizer_of_subgroup(h, h)
    }

    /// `N_within(h)`.
    pub fn normalizer(&self, within: &Subgroup, h: &Subgroup) -> Subgroup {
        let gens = self.generating_set(h);
        let els = within
            .elements()
            .iter()
            .copied()
            .filter(|&g| gens.iter().all(|&x| h.contains(self.conj(x, g))))
            .collect();
        Subgroup::from_sorted(self.order(), els)
    }

    /// Whether `k` is normal in `h` (assumes `k ≤ h`).
    pub fn is_normal(&self, h: &Subgroup, k: &Subgroup) -> bool {
        let kg = self.generating_set(k);
        self.generating_set(h).iter().all(|&g| kg.iter().all(|&x| k.contains(self.conj(x, g))))
    }

    pub fn is_abelian(&self, h: &Subgroup) -> bool {
        let gens = self.generating_set(h);
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A Sylow `p`-subgroup of the whole group, grown one step at a time
    /// inside normalizers: from a `p`-subgroup `P`, adjoin the least element
    /// `x ∈ N(P) − P` with `x^p ∈ P`.
    pub fn sylow_subgroup(&self, p: u64) -> Subgroup {
        let target = p_part(self.order() as u64, p);
        let whole = self.whole();
        let mut current = self.trivial();
        while (current.order() as u64) < target {
            let n = self.normalizer(&whole, &current);
            let x = n
                .elements()
                .iter()
                .copied()
                .find(|&x| !current.contains(x) && current.contains(self.pow(x, p)))
                .expect("a p-subgroup below Sylow size has a proper p-overgroup in its normalizer");
            current = self.join_elements(&current, &[x]);
        }
        current
    }

    /// Representatives `g` of the double cosets `H g K` of `within`, each the
    /// least element of its double coset, with the double coset sizes.
    pub fn double_cosets(&self, within: &Subgroup, h: &Subgroup, k: &Subgroup) -> Vec<DoubleCoset> {
        let mut assigned = FixedBitSet::with_capacity(self.order());
        let mut out = Vec::new();
        for &g in within.elements() {
            if assigned.contains(g.index()) {
                continue;
            }
            let mut size = 0;
            for &a in h.elements() {
                let ag = self.mul(a, g);
                for &b in k.elements() {
                    let x = self.mul(ag, b);
                    if !assigned.contains(x.index()) {
                        assigned.insert(x.index());
                        size += 1;
                    }
                }
            }
            out.push(DoubleCoset { representative: g, size });
        }
        out
    }

    /// Left cosets `xH` of `h` in `within`, each represented by its least element.
    pub fn left_transversal(&self, within: &Subgroup, h: &Subgroup) -> Transversal {
        self.transversal_by(within, h, false)
    }

    /// Same cosets as [`left_transversal`](Self::left_transversal), represented by their greatest elements.
    pub fn left_transversal_max(&self, within: &Subgroup, h: &Subgroup) -> Transversal {
        self.transversal_by(within, h, true)
    }

    fn transversal_by(&self, within: &Subgroup, h: &Subgroup, greatest: bool) -> Transversal {
        let mut coset_of = HashMap::with_capacity(within.order());
        let mut reps = Vec::new();
        let mut scan: Vec<ElemId> = within.elements().to_vec();
        if greatest {
            scan.reverse();
        }
        for g in scan {
            if coset_of.contains_key(&g) {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(g);
            for &x in h.elements() {
                coset_of.insert(self.mul(g, x), idx);
            }
        }
        Transversal { reps, coset_of }
    }

    /// `[H, H]`.
    pub fn commutator_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut comms: Vec<ElemId> = Vec::new();
        let mut seen = FixedBitSet::with_capacity(self.order());
        for &x in h.elements() {
            for &y in h.elements() {
                let c = self.commutator(x, y);
                if !seen.contains(c.index()) {
                    seen.insert(c.index());
                    comms.push(c);
                }
            }
        }
        comms.sort_unstable();
        self.closure(&comms)
    }

    /// `O^p(H)`: the subgroup generated by the `p′`-elements of `h`.
    pub fn p_residual(&self, h: &Subgroup, p: u64) -> Subgroup {
        let gens: Vec<ElemId> =
            h.elements().iter().copied().filter(|&x| self.element_order(x) as u64 % p != 0).collect();
        self.closure(&gens)
    }

    pub fn is_p_group(&self, h: &Subgroup, p: u64) -> bool {
        is_power_of(h.order() as u64, p)
    }
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

pub fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: ElemId,
    pub size: usize,
}

/// A set of left coset representatives with a lookup from every element of
/// the ambient subgroup to the index of its coset.
#[derive(Clone, Debug)]
pub struct Transversal {
    reps: Vec<ElemId>,
    coset_of: HashMap<ElemId, u32>,
}

impl Transversal {
    pub fn reps(&self) -> &[ElemId] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representative of the coset containing `x`.
    pub fn rep_of(&self, x: ElemId) -> ElemId {
        self.reps[self.coset_of[&x] as usize]
    }

    pub fn coset_index(&self, x: ElemId) -> Option<usize> {
        self.coset_of.get(&x).map(|&i| i as usize)
    }
}

/// A subgroup of some [`FiniteGroup`], as a sorted set of element ids.
#[derive(Clone)]
pub struct Subgroup {
    elements: Vec<ElemId>,
    mask: FixedBitSet,
}

impl Subgroup {
    pub(crate) fn from_sorted(universe: usize, elements: Vec<ElemId>) -> Self {
        let mut mask = FixedBitSet::with_capacity(universe);
        for x in &elements {
            mask.insert(x.index());
        }
        Subgroup { elements, mask }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ElemId] {
        &self.elements
    }

    pub fn contains(&self, x: ElemId) -> bool {
        self.mask.contains(x.index())
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the sorted element ids.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.elements.iter().map(|x| x.0).collect::<Vec<_>>())
    }
}
