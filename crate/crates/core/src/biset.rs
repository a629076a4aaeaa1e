//! Transfer maps into an abelian section `S/T` and characteristic bisets.
//!
//! A biset is kept in decomposed form: a list of transitive parts
//! `(S×S)/Δ_{S_i}^{φ_i}` with multiplicities. For the biset `Ω = G` of a
//! realized system the parts are indexed by the double cosets `SgS`, with
//! `S_i = ᵍS ∩ S` and `φ_i = c_g : ᵍS ∩ S → S ∩ S^g`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Injection};
use crate::group::{ElemId, FiniteGroup, Subgroup, Transversal};
use crate::section::{AbelianSection, Coset};

/// Bisets with more points than this are not checked orbit by orbit.
pub const ORBIT_CHECK_LIMIT: usize = 10_000;

pub const CONVENTION_NOTE: &str =
    "parts are (S x S)/Delta(S_i, phi_i) with S_i = gSg^-1 ∩ S and phi_i = c_g: x -> g^-1 x g into S ∩ S^g; maps compose left to right";

/// `u tr = ∏_{h ∈ [G/S]} ([uh]⁻¹ u h)ψ` over the canonical left transversal.
pub fn classical_transfer(g: &FiniteGroup, section: &AbelianSection, u: ElemId) -> Result<Coset> {
    let transversal = g.left_transversal(&g.whole(), section.top());
    classical_transfer_with(g, section, &transversal, u)
}

pub fn classical_transfer_with(
    g: &FiniteGroup,
    section: &AbelianSection,
    transversal: &Transversal,
    u: ElemId,
) -> Result<Coset> {
    let mut acc = Coset::TRIVIAL;
    for &h in transversal.reps() {
        let uh = g.mul(u, h);
        let r = transversal.rep_of(uh);
        let factor = g.mul(g.inv(r), uh);
        acc = section.mul(acc, section.project(factor)?);
    }
    Ok(acc)
}

/// Ordinary transfer from `S` to `sub` followed by `map` and the projection:
/// `u tr_{sub, map ψ}^S`.
pub fn subgroup_transfer(g: &FiniteGroup, section: &AbelianSection, map: &Injection, u: ElemId) -> Result<Coset> {
    let s = section.top();
    if !s.contains(u) {
        return Err(Error::NotMember(g.label(u)));
    }
    let transversal = g.left_transversal(s, map.domain());
    let mut acc = Coset::TRIVIAL;
    for &h in transversal.reps() {
        let uh = g.mul(u, h);
        let r = transversal.rep_of(uh);
        let factor = g.mul(g.inv(r), uh);
        let image = map
            .apply(factor)
            .ok_or_else(|| Error::Internal("transfer factor outside the subgroup".into()))?;
        acc = section.mul(acc, section.project(image)?);
    }
    Ok(acc)
}

/// Mackey form of the restriction of the classical transfer to `S`: the product
/// over double coset representatives `g` of `u tr_{ᵍS ∩ S, c_g ψ}^S`.
pub fn mackey_transfer(f: &FusionSystem, section: &AbelianSection, u: ElemId) -> Result<Coset> {
    let g = f.group();
    let s = f.sylow();
    let mut acc = Coset::TRIVIAL;
    for dc in g.double_cosets(&g.whole(), s, s) {
        let map = double_coset_map(f, dc.representative);
        acc = section.mul(acc, subgroup_transfer(g, section, &map, u)?);
    }
    Ok(acc)
}

/// `c_g : ᵍS ∩ S → S ∩ S^g`.
fn double_coset_map(f: &FusionSystem, x: ElemId) -> Injection {
    let g = f.group();
    let s = f.sylow();
    let domain = g.intersection(s, &g.conjugate_subgroup(s, g.inv(x)));
    Injection::conjugation(g, &domain, x)
}

#[derive(Clone, Debug)]
pub struct BisetPart {
    pub map: Injection,
    pub multiplicity: usize,
}

impl BisetPart {
    pub fn domain(&self) -> &Subgroup {
        self.map.domain()
    }
}

#[derive(Clone, Debug)]
pub struct BisetDecomposition {
    parts: Vec<BisetPart>,
    sylow_order: usize,
    /// `Some(m)` when this is `m` disjoint copies of the ambient group.
    ambient_copies: Option<usize>,
}

impl BisetDecomposition {
    /// A hand-built decomposition; checked only for shape here.
    pub fn from_parts(f: &FusionSystem, parts: Vec<BisetPart>) -> Result<Self> {
        for part in &parts {
            if part.multiplicity == 0 {
                return Err(Error::Precondition("biset part with multiplicity zero".into()));
            }
            if !part.domain().is_subset(f.sylow()) {
                return Err(Error::Precondition("biset part domain is not inside S".into()));
            }
        }
        Ok(BisetDecomposition { parts, sylow_order: f.sylow().order(), ambient_copies: None })
    }

    pub fn parts(&self) -> &[BisetPart] {
        &self.parts
    }

    /// `Σ m_i |S|² / |S_i|`.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|p| p.multiplicity * self.sylow_order * self.sylow_order / p.domain().order()).sum()
    }

    /// `|Ω / S|`.
    pub fn orbit_count(&self) -> usize {
        self.size() / self.sylow_order
    }

    pub fn is_ambient(&self) -> bool {
        self.ambient_copies.is_some()
    }

    /// `m` disjoint copies of `self`.
    pub fn disjoint_copies(&self, m: usize) -> Self {
        BisetDecomposition {
            parts: self.parts.iter().map(|p| BisetPart { map: p.map.clone(), multiplicity: p.multiplicity * m }).collect(),
            sylow_order: self.sylow_order,
            ambient_copies: self.ambient_copies.map(|c| c * m),
        }
    }
}

/// `Ω = G`, one part per double coset `SgS`.
pub fn characteristic_biset(f: &FusionSystem) -> BisetDecomposition {
    let g = f.group();
    let s = f.sylow();
    let parts = g
        .double_cosets(&g.whole(), s, s)
        .into_iter()
        .map(|dc| BisetPart { map: double_coset_map(f, dc.representative), multiplicity: 1 })
        .collect();
    BisetDecomposition { parts, sylow_order: s.order(), ambient_copies: Some(1) }
}

/// `u tr_{Ω,ψ} = ∏_i u tr_{S_i, φ_i ψ}^S`, parts counted with multiplicity.
pub fn biset_transfer(f: &FusionSystem, omega: &BisetDecomposition, section: &AbelianSection, u: ElemId) -> Result<Coset> {
    let g = f.group();
    let mut acc = Coset::TRIVIAL;
    for part in omega.parts() {
        let value = subgroup_transfer(g, section, &part.map, u)?;
        acc = section.mul(acc, section.pow(value, part.multiplicity as u64));
    }
    Ok(acc)
}

/// `|(Ω/S)^P|`: the number of pairs `(i, t)` with `t ∈ [P\S/S_i]` and
/// `P ≤ ᵗS_i`, counted with multiplicity.
pub fn orbit_fixed_points(f: &FusionSystem, omega: &BisetDecomposition, p: &Subgroup) -> usize {
    let g = f.group();
    let s = f.sylow();
    let gens = g.generating_set(p);
    omega
        .parts()
        .iter()
        .map(|part| {
            let fixed = g
                .double_cosets(s, p, part.domain())
                .into_iter()
                .filter(|dc| gens.iter().all(|&x| part.domain().contains(g.conj(x, dc.representative))))
                .count();
            fixed * part.multiplicity
        })
        .sum()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub passed: bool,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl PropertyCheck {
    fn from_violations(checked: usize, violations: Vec<String>) -> Self {
        PropertyCheck { passed: violations.is_empty(), checked, violations }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsomorphismMethod {
    /// `g ↦ gx` on the points of `G`, for `φ = c_x`.
    WitnessMap,
    /// Matching `S × P` orbit types (stabilizers up to conjugacy).
    OrbitTypes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicReport {
    pub size: usize,
    pub orbit_count: usize,
    pub prime: u64,
    pub stabilizers_in_fusion: PropertyCheck,
    pub fusion_invariance: PropertyCheck,
    pub prime_to_p: PropertyCheck,
    pub method: IsomorphismMethod,
    pub convention: String,
}

impl CharacteristicReport {
    pub fn passed(&self) -> bool {
        self.stabilizers_in_fusion.passed && self.fusion_invariance.passed && self.prime_to_p.passed
    }
}

/// Checks the three defining properties of a characteristic biset. Realized
/// bisets (copies of `G`) use the explicit witness map for the invariance
/// property; anything else is compared orbit by orbit.
pub fn verify_characteristic(f: &FusionSystem, omega: &BisetDecomposition) -> Result<CharacteristicReport> {
    let method = if omega.is_ambient() { IsomorphismMethod::WitnessMap } else { IsomorphismMethod::OrbitTypes };
    verify_characteristic_with(f, omega, method)
}

pub fn verify_characteristic_with(
    f: &FusionSystem,
    omega: &BisetDecomposition,
    method: IsomorphismMethod,
) -> Result<CharacteristicReport> {
    let g = f.group();
    let s = f.sylow();

    // (a) every part is (S×S)/Δ_P^φ with φ ∈ Hom_F(P, S)
    let mut violations = Vec::new();
    for (i, part) in omega.parts().iter().enumerate() {
        let map = &part.map;
        if !map.is_injective_homomorphism(g) || !map.image(g).is_subset(s) {
            violations.push(format!("part {i}: map is not an injective homomorphism into S"));
            continue;
        }
        if !map.graph().is_subgroup(g) {
            violations.push(format!("part {i}: graph is not a subgroup of S x S"));
            continue;
        }
        let realized = map.witness_agrees(g) || f.hom_f(map.domain(), s).iter().any(|h| h.same_map(map));
        if !realized {
            violations.push(format!("part {i}: map on subgroup of order {} is not a fusion morphism", map.domain().order()));
        }
    }
    let stabilizers_in_fusion = PropertyCheck::from_violations(omega.parts().len(), violations);

    // (b) _SΩ_P ≅ _SΩ_φ for every P (up to S-conjugacy) and φ ∈ Hom_F(P, S)
    let mut violations = Vec::new();
    let mut checked = 0;
    for p in f.subgroup_class_reps()? {
        for phi in f.hom_f(&p, s) {
            checked += 1;
            let ok = match method {
                IsomorphismMethod::WitnessMap => {
                    let copies = omega
                        .ambient_copies
                        .ok_or_else(|| Error::Precondition("witness map needs a realized biset".into()))?;
                    witness_map_is_isomorphism(g, s, &phi, copies)
                }
                IsomorphismMethod::OrbitTypes => orbit_types_match(g, s, omega, &phi)?,
            };
            if !ok {
                violations.push(format!(
                    "no S-P biset isomorphism for P of order {} and phi with witness {}",
                    p.order(),
                    phi.witness().map(|w| g.label(w)).unwrap_or_else(|| "-".into())
                ));
            }
        }
    }
    let fusion_invariance = PropertyCheck::from_violations(checked, violations);

    // (c) |Ω|/|S| prime to p
    let orbit_count = omega.orbit_count();
    let prime_to_p = if orbit_count as u64 % f.prime() == 0 {
        PropertyCheck::from_violations(1, vec![format!("|Omega|/|S| = {orbit_count} is divisible by {}", f.prime())])
    } else {
        PropertyCheck::from_violations(1, vec![])
    };

    Ok(CharacteristicReport {
        size: omega.size(),
        orbit_count,
        prime: f.prime(),
        stabilizers_in_fusion,
        fusion_invariance,
        prime_to_p,
        method,
        convention: CONVENTION_NOTE.to_string(),
    })
}

/// For `Ω` = `copies` × `G` and `φ = c_x`, checks that `g ↦ gx` is a bijection
/// `_SG_P → _SG_φ` commuting with both actions (`s·g·t ↦ s·(gx)·t^φ`).
fn witness_map_is_isomorphism(g: &FiniteGroup, s: &Subgroup, phi: &Injection, copies: usize) -> bool {
    let Some(x) = phi.witness() else { return false };
    if !phi.witness_agrees(g) {
        return false;
    }
    let image: BTreeSet<ElemId> = g.ids().map(|y| g.mul(y, x)).collect();
    if image.len() != g.order() {
        return false;
    }
    let s_gens = g.generating_set(s);
    let p_gens = g.generating_set(phi.domain());
    // identical on every copy
    let _ = copies;
    g.ids().all(|y| {
        let fy = g.mul(y, x);
        s_gens.iter().all(|&a| g.mul(g.mul(a, y), x) == g.mul(a, fy))
            && p_gens.iter().all(|&t| {
                let t_phi = phi.apply(t).expect("generator in domain");
                g.mul(g.mul(y, t), x) == g.mul(fy, t_phi)
            })
    })
}

/// Points of a transitive part `(S×S)/Δ`, as canonical pairs `(h, k)` with
/// `Δ(h,k) = {(xh, x^φ k) : x ∈ S_i}`.
struct PartPoints {
    points: Vec<(ElemId, ElemId)>,
    index: HashMap<(ElemId, ElemId), usize>,
}

fn part_points(g: &FiniteGroup, s: &Subgroup, map: &Injection) -> PartPoints {
    let mut points = Vec::new();
    let mut index = HashMap::new();
    for &h in s.elements() {
        for &k in s.elements() {
            if index.contains_key(&(h, k)) {
                continue;
            }
            let orbit: Vec<(ElemId, ElemId)> = map
                .domain()
                .elements()
                .iter()
                .zip(map.images())
                .map(|(&x, &xp)| (g.mul(x, h), g.mul(xp, k)))
                .collect();
            let canon = *orbit.iter().min().expect("nonempty");
            let id = points.len();
            points.push(canon);
            for pair in orbit {
                index.insert(pair, id);
            }
        }
    }
    PartPoints { points, index }
}

/// Orbit-type multiset of `_SΩ_φ` as an `S × P` set, with `(s, t)` acting by
/// `ω ↦ s·ω·t^φ`. Keys are canonical stabilizers up to `S × P` conjugacy.
fn orbit_types(g: &FiniteGroup, s: &Subgroup, omega: &BisetDecomposition, phi: &Injection) -> BTreeMap<Vec<(ElemId, ElemId)>, usize> {
    let p = phi.domain();
    let mut out = BTreeMap::new();
    for part in omega.parts() {
        let pts = part_points(g, s, &part.map);
        // left s: Δ(h,k) ↦ Δ(h s⁻¹, k); right t: Δ(h,k) ↦ Δ(h, k t^φ)
        let act = |pt: usize, a: ElemId, t: ElemId| -> usize {
            let (h, k) = pts.points[pt];
            let tp = phi.apply(t).expect("t in domain");
            pts.index[&(g.mul(h, g.inv(a)), g.mul(k, tp))]
        };
        let mut seen = vec![false; pts.points.len()];
        for start in 0..pts.points.len() {
            if seen[start] {
                continue;
            }
            let mut stab = Vec::new();
            for &a in s.elements() {
                for &t in p.elements() {
                    let y = act(start, a, t);
                    seen[y] = true;
                    if y == start {
                        stab.push((a, t));
                    }
                }
            }
            let key = canonical_conjugate(g, s, p, &stab);
            *out.entry(key).or_insert(0) += part.multiplicity;
        }
    }
    out
}

fn canonical_conjugate(g: &FiniteGroup, s: &Subgroup, p: &Subgroup, stab: &[(ElemId, ElemId)]) -> Vec<(ElemId, ElemId)> {
    let mut best: Option<Vec<(ElemId, ElemId)>> = None;
    for &a in s.elements() {
        for &b in p.elements() {
            let mut c: Vec<(ElemId, ElemId)> = stab.iter().map(|&(x, y)| (g.conj(x, a), g.conj(y, b))).collect();
            c.sort_unstable();
            if best.as_ref().is_none_or(|cur| c < *cur) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}

fn orbit_types_match(g: &FiniteGroup, s: &Subgroup, omega: &BisetDecomposition, phi: &Injection) -> Result<bool> {
    if omega.size() > ORBIT_CHECK_LIMIT {
        return Err(Error::SizeLimit { what: format!("biset of size {}", omega.size()), limit: ORBIT_CHECK_LIMIT });
    }
    let restricted = Injection::identity(phi.domain());
    Ok(orbit_types(g, s, omega, &restricted) == orbit_types(g, s, omega, phi))
}

/// `{element → coset}` for every element of `S`, keyed by cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferTable {
    pub section_order: usize,
    pub kernel_order: usize,
    pub values: BTreeMap<String, String>,
}

pub fn transfer_table(f: &FusionSystem, omega: &BisetDecomposition, section: &AbelianSection) -> Result<TransferTable> {
    let g = f.group();
    let mut values = BTreeMap::new();
    let mut kernel = 0;
    for &u in f.sylow().elements() {
        let c = biset_transfer(f, omega, section, u)?;
        if c == Coset::TRIVIAL {
            kernel += 1;
        }
        values.insert(g.label(u), coset_label(g, section, c));
    }
    Ok(TransferTable { section_order: section.order(), kernel_order: kernel, values })
}

/// A coset printed as `rep·T`, with `rep` its least element.
pub fn coset_label(g: &FiniteGroup, section: &AbelianSection, c: Coset) -> String {
    format!("{}T", g.label(section.representative(c)))
}
