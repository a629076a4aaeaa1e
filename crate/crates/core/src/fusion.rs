//! The fusion system `F_S(G)` of a finite group at a prime.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::group::{is_power_of, is_prime, p_part, ElemId, FiniteGroup, Subgroup};
use crate::lattice;
use crate::perm::Permutation;

/// Strongly p-embedded search is refused above this `|Out_F(P)|`.
pub const OUT_LIMIT: usize = 10_000;

/// An injective homomorphism `P → S`, stored as the image of each element
/// of `P` in the order of `P.elements()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Injection {
    domain: Subgroup,
    images: Vec<ElemId>,
    witness: Option<ElemId>,
}

impl Injection {
    pub fn identity(domain: &Subgroup) -> Self {
        Injection { domain: domain.clone(), images: domain.elements().to_vec(), witness: Some(ElemId::IDENTITY) }
    }

    /// `c_g` restricted to `domain`.
    pub fn conjugation(g: &FiniteGroup, domain: &Subgroup, witness: ElemId) -> Self {
        let images = domain.elements().iter().map(|&x| g.conj(x, witness)).collect();
        Injection { domain: domain.clone(), images, witness: Some(witness) }
    }

    /// An injection given by explicit images; checked to be an injective homomorphism.
    pub fn from_images(g: &FiniteGroup, domain: &Subgroup, images: Vec<ElemId>) -> Result<Self> {
        let map = Injection { domain: domain.clone(), images, witness: None };
        if map.images.len() != domain.order() || !map.is_injective_homomorphism(g) {
            return Err(Error::Precondition("images do not define an injective homomorphism".into()));
        }
        Ok(map)
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn images(&self) -> &[ElemId] {
        &self.images
    }

    pub fn witness(&self) -> Option<ElemId> {
        self.witness
    }

    pub fn apply(&self, x: ElemId) -> Option<ElemId> {
        self.domain.elements().binary_search(&x).ok().map(|i| self.images[i])
    }

    pub fn image(&self, g: &FiniteGroup) -> Subgroup {
        let mut els = self.images.clone();
        els.sort_unstable();
        g.subgroup_from_elements(els).expect("image of a homomorphism is a subgroup")
    }

    pub fn is_identity(&self) -> bool {
        self.images == self.domain.elements()
    }

    pub fn is_injective_homomorphism(&self, g: &FiniteGroup) -> bool {
        let distinct: BTreeSet<ElemId> = self.images.iter().copied().collect();
        if distinct.len() != self.images.len() {
            return false;
        }
        let els = self.domain.elements();
        for (i, &a) in els.iter().enumerate() {
            for (j, &b) in els.iter().enumerate() {
                let ab = g.mul(a, b);
                match self.apply(ab) {
                    Some(img) if img == g.mul(self.images[i], self.images[j]) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Whether conjugation by the witness agrees with the map on the domain.
    pub fn witness_agrees(&self, g: &FiniteGroup) -> bool {
        match self.witness {
            Some(w) => self.domain.elements().iter().zip(&self.images).all(|(&x, &y)| g.conj(x, w) == y),
            None => false,
        }
    }

    /// `self` followed by `other`; needs `image(self) ≤ domain(other)`.
    pub fn then(&self, g: &FiniteGroup, other: &Injection) -> Result<Injection> {
        let images = self
            .images
            .iter()
            .map(|&y| other.apply(y))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Precondition("composition outside the second domain".into()))?;
        let witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(g.mul(a, b)),
            _ => None,
        };
        Ok(Injection { domain: self.domain.clone(), images, witness })
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<Injection> {
        if !sub.is_subset(&self.domain) {
            return Err(Error::Precondition("restriction to a non-subgroup of the domain".into()));
        }
        let images = sub.elements().iter().map(|&x| self.apply(x).expect("subset")).collect();
        Ok(Injection { domain: sub.clone(), images, witness: self.witness })
    }

    /// The inverse isomorphism from the image back onto the domain.
    pub fn inverse(&self, g: &FiniteGroup) -> Injection {
        let mut pairs: Vec<(ElemId, ElemId)> = self.images.iter().copied().zip(self.domain.elements().iter().copied()).collect();
        pairs.sort_unstable();
        let domain = self.image(g);
        Injection { domain, images: pairs.into_iter().map(|(_, x)| x).collect(), witness: self.witness.map(|w| g.inv(w)) }
    }

    /// Same map, ignoring witnesses.
    pub fn same_map(&self, other: &Injection) -> bool {
        self.domain == other.domain && self.images == other.images
    }

    pub fn graph(&self) -> GraphSubgroup {
        GraphSubgroup { pairs: self.domain.elements().iter().copied().zip(self.images.iter().copied()).collect() }
    }
}

/// `Δ_P^φ = {(t, t^φ) : t ∈ P} ≤ S × S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSubgroup {
    pub pairs: Vec<(ElemId, ElemId)>,
}

impl GraphSubgroup {
    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Closed under the componentwise product of `S × S`.
    pub fn is_subgroup(&self, g: &FiniteGroup) -> bool {
        let set: BTreeSet<(ElemId, ElemId)> = self.pairs.iter().copied().collect();
        self.pairs.iter().all(|&(a, b)| {
            self.pairs.iter().all(|&(c, d)| set.contains(&(g.mul(a, c), g.mul(b, d))))
        })
    }
}

/// `Aut_F(P) = N_G(P)/C_G(P)` as a permutation group on the positions of `P.elements()`.
pub struct Automizer {
    pub subgroup: Subgroup,
    pub group: FiniteGroup,
    /// Least ambient witness per element of `group`.
    pub witnesses: Vec<ElemId>,
    /// `Inn(P)`, as a subgroup of `group`.
    pub inner: Subgroup,
}

impl Automizer {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn out_order(&self) -> usize {
        self.group.order() / self.inner.order()
    }

    pub fn to_injection(&self, g: &FiniteGroup, a: ElemId) -> Injection {
        let els = self.subgroup.elements();
        let images = self.group.perm(a).images().iter().map(|&i| els[i as usize]).collect();
        let inj = Injection { domain: self.subgroup.clone(), images, witness: Some(self.witnesses[a.index()]) };
        debug_assert!(inj.witness_agrees(g));
        inj
    }

    pub fn injections(&self, g: &FiniteGroup) -> Vec<Injection> {
        self.group.ids().map(|a| self.to_injection(g, a)).collect()
    }
}

pub struct FusionSystem {
    group: FiniteGroup,
    sylow: Subgroup,
    prime: u64,
    subgroups: OnceLock<Vec<Subgroup>>,
}

impl std::fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FusionSystem")
            .field("group", &self.group)
            .field("sylow_order", &self.sylow.order())
            .field("prime", &self.prime)
            .finish()
    }
}

impl FusionSystem {
    /// `F_S(G)` with `S` the deterministic Sylow subgroup of `group`.
    pub fn new(group: FiniteGroup, prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Precondition(format!("{prime} is not prime")));
        }
        let sylow = group.sylow_subgroup(prime);
        Ok(FusionSystem { group, sylow, prime, subgroups: OnceLock::new() })
    }

    pub fn with_sylow(group: FiniteGroup, sylow: Subgroup, prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Precondition(format!("{prime} is not prime")));
        }
        if sylow.order() as u64 != p_part(group.order() as u64, prime) || !is_power_of(sylow.order() as u64, prime) {
            return Err(Error::Precondition("not a Sylow subgroup".into()));
        }
        Ok(FusionSystem { group, sylow, prime, subgroups: OnceLock::new() })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn sylow(&self) -> &Subgroup {
        &self.sylow
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// All subgroups of `S`, by order then lexicographically. Computed once.
    pub fn subgroups(&self) -> Result<&[Subgroup]> {
        if let Some(s) = self.subgroups.get() {
            return Ok(s);
        }
        let subs = lattice::all_subgroups(&self.group, &self.sylow)?;
        Ok(self.subgroups.get_or_init(|| subs))
    }

    /// One representative (the least) of each `S`-conjugacy class of subgroups of `S`.
    pub fn subgroup_class_reps(&self) -> Result<Vec<Subgroup>> {
        let subs = self.subgroups()?;
        let classes = lattice::conjugacy_classes(&self.group, subs, &self.sylow);
        Ok(classes.iter().map(|c| subs[c[0]].clone()).collect())
    }

    /// `Hom_F(P, Q)`: the distinct maps `c_g|_P` with `P^g ≤ Q`, each with its
    /// least witness, sorted by image table.
    pub fn hom_f(&self, p: &Subgroup, q: &Subgroup) -> Vec<Injection> {
        let g = &self.group;
        let gens = g.generating_set(p);
        let mut maps: BTreeMap<Vec<ElemId>, ElemId> = BTreeMap::new();
        for x in g.ids() {
            if !gens.iter().all(|&y| q.contains(g.conj(y, x))) {
                continue;
            }
            let images: Vec<ElemId> = p.elements().iter().map(|&y| g.conj(y, x)).collect();
            maps.entry(images).or_insert(x);
        }
        maps.into_iter().map(|(images, w)| Injection { domain: p.clone(), images, witness: Some(w) }).collect()
    }

    /// `u^G ∩ S`, sorted.
    pub fn f_conjugates_element(&self, u: ElemId) -> Vec<ElemId> {
        let g = &self.group;
        let set: BTreeSet<ElemId> = g.ids().map(|x| g.conj(u, x)).filter(|&v| self.sylow.contains(v)).collect();
        set.into_iter().collect()
    }

    /// `{P^g ≤ S : g ∈ G}`, sorted.
    pub fn f_conjugates_subgroup(&self, p: &Subgroup) -> Vec<Subgroup> {
        let g = &self.group;
        let gens = g.generating_set(p);
        let mut out: BTreeSet<Subgroup> = BTreeSet::new();
        for x in g.ids() {
            if gens.iter().all(|&y| self.sylow.contains(g.conj(y, x))) {
                out.insert(g.conjugate_subgroup(p, x));
            }
        }
        out.into_iter().collect()
    }

    pub fn centralizer_in_s(&self, p: &Subgroup) -> Subgroup {
        self.group.centralizer_of_subgroup(&self.sylow, p)
    }

    pub fn normalizer_in_s(&self, p: &Subgroup) -> Subgroup {
        self.group.normalizer(&self.sylow, p)
    }

    pub fn is_fully_centralized(&self, p: &Subgroup) -> bool {
        let own = self.centralizer_in_s(p).order();
        self.f_conjugates_subgroup(p).iter().all(|q| self.centralizer_in_s(q).order() <= own)
    }

    pub fn is_fully_normalized(&self, p: &Subgroup) -> bool {
        let own = self.normalizer_in_s(p).order();
        self.f_conjugates_subgroup(p).iter().all(|q| self.normalizer_in_s(q).order() <= own)
    }

    /// Whether `C_S(t)` is a Sylow subgroup of `C_G(t)`.
    pub fn is_extremal(&self, t: ElemId) -> bool {
        let g = &self.group;
        let cg = g.centralizer(&g.whole(), &[t]);
        let cs = g.centralizer(&self.sylow, &[t]);
        cs.order() as u64 == p_part(cg.order() as u64, self.prime)
    }

    /// The fully centralized members of `u^F`: those `v ∈ u^G ∩ S` with `|C_S(v)|` maximal.
    pub fn fully_centralized_conjugates(&self, u: ElemId) -> Vec<ElemId> {
        let g = &self.group;
        let conj = self.f_conjugates_element(u);
        let sizes: Vec<usize> = conj.iter().map(|&v| g.centralizer(&self.sylow, &[v]).order()).collect();
        let best = sizes.iter().copied().max().unwrap_or(0);
        conj.into_iter().zip(sizes).filter(|&(_, s)| s == best).map(|(v, _)| v).collect()
    }

    /// `foc(F) = ⟨x⁻¹ x^g : x, x^g ∈ S⟩`.
    pub fn focal_subgroup(&self) -> Subgroup {
        let g = &self.group;
        let mut gens: BTreeSet<ElemId> = BTreeSet::new();
        for y in g.ids() {
            for &x in self.sylow.elements() {
                let xg = g.conj(x, y);
                if self.sylow.contains(xg) {
                    gens.insert(g.mul(g.inv(x), xg));
                }
            }
        }
        g.closure(&gens.into_iter().collect::<Vec<_>>())
    }

    /// `hyp(F) = S ∩ O^p(G)` for the realized system.
    pub fn hyperfocal_subgroup(&self) -> Subgroup {
        let g = &self.group;
        let residual = g.p_residual(&g.whole(), self.prime);
        g.intersection(&self.sylow, &residual)
    }

    /// Whether `F = O^p(F)`.
    pub fn is_op_closed(&self) -> bool {
        self.hyperfocal_subgroup() == self.sylow
    }

    pub fn aut_f(&self, p: &Subgroup) -> Result<Automizer> {
        let g = &self.group;
        let normalizer = g.normalizer(&g.whole(), p);
        let els = p.elements();
        let position = |x: ElemId| els.binary_search(&x).expect("normalizer preserves P") as u32;
        let action = |w: ElemId| -> Permutation {
            Permutation::from_images(els.iter().map(|&x| position(g.conj(x, w))).collect())
                .expect("conjugation permutes P")
        };
        let gens: Vec<Permutation> = g.generating_set(&normalizer).into_iter().map(action).collect();
        let aut = FiniteGroup::from_generators(format!("Aut_F({})", p.order()), els.len(), gens)?;
        let mut witnesses = vec![None; aut.order()];
        for &w in normalizer.elements() {
            let a = aut.require(&action(w))?;
            if witnesses[a.index()].is_none() {
                witnesses[a.index()] = Some(w);
            }
        }
        let witnesses: Vec<ElemId> = witnesses
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Internal("automizer element without a witness".into()))?;
        let inner_ids = els.iter().map(|&x| aut.require(&action(x))).collect::<Result<Vec<_>>>()?;
        let inner = aut.closure(&inner_ids);
        Ok(Automizer { subgroup: p.clone(), group: aut, witnesses, inner })
    }

    /// `C_S(Q) ≤ Q` for every `Q ∈ P^F`.
    pub fn is_centric(&self, p: &Subgroup) -> bool {
        self.f_conjugates_subgroup(p).iter().all(|q| self.centralizer_in_s(q).is_subset(q))
    }

    /// `O_p(Out_F(P)) = 1`, i.e. `O_p(Aut_F(P)) = Inn(P)`.
    pub fn is_radical(&self, p: &Subgroup) -> Result<bool> {
        let aut = self.aut_f(p)?;
        let a = &aut.group;
        let syl = a.sylow_subgroup(self.prime);
        let mut core = syl.clone();
        for x in a.ids() {
            core = a.intersection(&core, &a.conjugate_subgroup(&syl, x));
        }
        Ok(core == aut.inner)
    }

    /// Centric with `Out_F(P)` containing a strongly `p`-embedded subgroup,
    /// found by brute force over the subgroups `Inn(P) ≤ H < Aut_F(P)`.
    pub fn is_essential(&self, p: &Subgroup) -> Result<bool> {
        if p == &self.sylow {
            return Err(Error::Precondition("S itself is never essential".into()));
        }
        if !self.is_centric(p) {
            return Ok(false);
        }
        let aut = self.aut_f(p)?;
        Ok(strongly_p_embedded(&aut, self.prime)?.is_some())
    }

    /// Essential subgroups of `S`, sorted.
    pub fn essential_subgroups(&self) -> Result<Vec<Subgroup>> {
        let mut out = Vec::new();
        for p in self.subgroups()? {
            if p != &self.sylow && self.is_essential(p)? {
                out.push(p.clone());
            }
        }
        Ok(out)
    }

    /// The `F`-conjugacy classes of subgroups of `S`.
    pub fn f_classes(&self) -> Result<Vec<Vec<Subgroup>>> {
        let mut seen: HashMap<Subgroup, ()> = HashMap::new();
        let mut out = Vec::new();
        for p in self.subgroups()? {
            if seen.contains_key(p) {
                continue;
            }
            let class = self.f_conjugates_subgroup(p);
            for q in &class {
                seen.insert(q.clone(), ());
            }
            out.push(class);
        }
        Ok(out)
    }
}

/// A strongly `p`-embedded subgroup of `Out = Aut/Inn`, given by its preimage
/// `Inn ≤ H < Aut`: `p` divides `|H : Inn|` and `p ∤ |H ∩ H^x : Inn|` for all
/// `x ∈ Aut − H`. Returns the least such preimage.
pub fn strongly_p_embedded(aut: &Automizer, p: u64) -> Result<Option<Subgroup>> {
    let out = aut.out_order();
    if out as u64 % p != 0 {
        return Ok(None);
    }
    if out > OUT_LIMIT {
        return Err(Error::SizeLimit { what: format!("Out_F(P) of order {out}"), limit: OUT_LIMIT });
    }
    let a = &aut.group;
    let inn = aut.inner.order();
    let whole = a.whole();
    let candidates = lattice::subgroups_between_with_limit(a, &aut.inner, &whole, OUT_LIMIT)?;
    for h in candidates {
        if h == whole || (h.order() / inn) as u64 % p != 0 {
            continue;
        }
        let ok = a.ids().filter(|&x| !h.contains(x)).all(|x| {
            let meet = a.intersection(&h, &a.conjugate_subgroup(&h, x));
            (meet.order() / inn) as u64 % p != 0
        });
        if ok {
            return Ok(Some(h));
        }
    }
    Ok(None)
}
