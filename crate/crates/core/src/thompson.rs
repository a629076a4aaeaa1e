//! Thompson-Lyons transfer: hypothesis checks, witness search and the
//! internal quantities of the transfer argument.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::biset::{self, BisetDecomposition};
use crate::error::{Error, Result};
use crate::fusion::FusionSystem;
use crate::group::{ElemId, Subgroup};
use crate::lattice;
use crate::section::{AbelianSection, Coset};

/// A triple `(F, T, u)` with `T` a proper normal subgroup of `S`, `S/T`
/// abelian and `u ∈ S − T`.
#[derive(Clone, Debug)]
pub struct TlInstance<'a> {
    system: &'a FusionSystem,
    t: Subgroup,
    u: ElemId,
    section: AbelianSection,
    omega: BisetDecomposition,
}

impl<'a> TlInstance<'a> {
    pub fn new(system: &'a FusionSystem, t: &Subgroup, u: ElemId) -> Result<Self> {
        let omega = biset::characteristic_biset(system);
        Self::with_biset(system, t, u, omega)
    }

    pub fn with_biset(system: &'a FusionSystem, t: &Subgroup, u: ElemId, omega: BisetDecomposition) -> Result<Self> {
        let s = system.sylow();
        if t == s {
            return Err(Error::Precondition("T must be a proper subgroup of S".into()));
        }
        let section = AbelianSection::new(system.group(), s, t)?;
        if !s.contains(u) || t.contains(u) {
            return Err(Error::Precondition(format!("u = {} must lie in S - T", system.group().label(u))));
        }
        Ok(TlInstance { system, t: t.clone(), u, section, omega })
    }

    pub fn system(&self) -> &FusionSystem {
        self.system
    }

    pub fn t(&self) -> &Subgroup {
        &self.t
    }

    pub fn u(&self) -> ElemId {
        self.u
    }

    pub fn section(&self) -> &AbelianSection {
        &self.section
    }

    pub fn biset(&self) -> &BisetDecomposition {
        &self.omega
    }

    /// Fully centralized `F`-conjugates of `u` lying in `S − T`, sorted.
    pub fn i_set(&self) -> Vec<ElemId> {
        self.system.fully_centralized_conjugates(self.u).into_iter().filter(|&v| !self.t.contains(v)).collect()
    }
}

/// (1): `u` has least order in `S − T`.
pub fn check_condition_1(inst: &TlInstance) -> bool {
    let g = inst.system.group();
    let least = inst
        .system
        .sylow()
        .elements()
        .iter()
        .filter(|&&x| !inst.t.contains(x))
        .map(|&x| g.element_order(x))
        .min()
        .expect("S - T is nonempty");
    g.element_order(inst.u) == least
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition2 {
    pub holds: bool,
    pub i_set: Vec<ElemId>,
    /// `𝓘T`, deduplicated and sorted.
    pub cosets: Vec<Coset>,
    /// Some coset of `𝓘T` has order other than `p`.
    pub outside_omega_1: bool,
}

/// (2): `𝓘T` is linearly independent in `Ω₁(S/T)`.
pub fn check_condition_2(inst: &TlInstance) -> Result<Condition2> {
    let i_set = inst.i_set();
    let mut cosets = i_set.iter().map(|&v| inst.section.project(v)).collect::<Result<Vec<_>>>()?;
    cosets.sort_unstable();
    cosets.dedup();
    let p = inst.system.prime();
    let outside_omega_1 = cosets.iter().any(|&c| inst.section.coset_order(c) as u64 != p);
    let holds = !outside_omega_1 && inst.section.linearly_independent(&cosets, p)?;
    Ok(Condition2 { holds, i_set, cosets, outside_omega_1 })
}

/// (3): `F = O^p(F)`.
pub fn check_condition_3(inst: &TlInstance) -> bool {
    inst.system.is_op_closed()
}

/// The least fully centralized `F`-conjugate of `u` inside `T`.
pub fn find_witness(inst: &TlInstance) -> Option<ElemId> {
    inst.system.fully_centralized_conjugates(inst.u).into_iter().find(|&v| inst.t.contains(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferTrace {
    /// The element actually traced: `u` itself when fully centralized,
    /// otherwise the least fully centralized conjugate in `S − T` (or in `S`).
    pub traced: ElemId,
    pub centralizer_order: usize,
    /// `|𝒯|`, counted with part multiplicities.
    pub pairs: usize,
    /// `k_j` for each coset `u_jT` met by a pair of `𝒯`.
    pub exponents: BTreeMap<Coset, usize>,
    /// `|(Ω/S)^P|` computed independently.
    pub fixed_points: usize,
    /// Product of all Mackey factors.
    pub value: Coset,
    /// `u tr_{Ω,ψ}` computed directly from the parts.
    pub biset_value: Coset,
    /// Factors with `p | |P : ᵗS_i ∩ P|` that are nontrivial mod `T`.
    pub nontrivial_divisible_factors: usize,
    /// Pairs of `𝒯` whose factor is not a fully centralized conjugate.
    pub non_centralized_factors: usize,
}

impl TransferTrace {
    pub fn exponent_sum(&self) -> usize {
        self.exponents.values().sum()
    }
}

/// Evaluates `u tr_{Ω,ψ}` through the Mackey factorization over
/// `t ∈ [P\S/S_i]` with `P = C_S(u)`.
pub fn transfer_trace(inst: &TlInstance) -> Result<TransferTrace> {
    let f = inst.system;
    let g = f.group();
    let s = f.sylow();
    let centralized = f.fully_centralized_conjugates(inst.u);
    let traced = if centralized.contains(&inst.u) {
        inst.u
    } else {
        centralized.iter().copied().find(|&v| !inst.t.contains(v)).unwrap_or(centralized[0])
    };
    let p_sub = g.centralizer(s, &[traced]);
    let p_gens = g.generating_set(&p_sub);
    let prime = f.prime() as usize;

    let mut exponents: BTreeMap<Coset, usize> = BTreeMap::new();
    let mut pairs = 0;
    let mut value = Coset::TRIVIAL;
    let mut nontrivial_divisible_factors = 0;
    let mut non_centralized_factors = 0;
    for part in inst.omega.parts() {
        let si = part.domain();
        for dc in g.double_cosets(s, &p_sub, si) {
            let t = dc.representative;
            // |P : ᵗS_i ∩ P| with ᵗS_i = t S_i t⁻¹
            let conj_si = g.conjugate_subgroup(si, g.inv(t));
            let index = p_sub.order() / g.intersection(&conj_si, &p_sub).order();
            let power = g.pow(traced, index as u64);
            let image = part
                .map
                .apply(g.conj(power, t))
                .ok_or_else(|| Error::Internal("Mackey factor outside S_i".into()))?;
            let coset = inst.section.project(image)?;
            let coset = inst.section.pow(coset, part.multiplicity as u64);
            value = inst.section.mul(value, coset);
            if index == 1 {
                debug_assert!(p_gens.iter().all(|&x| si.contains(g.conj(x, t))));
                pairs += part.multiplicity;
                *exponents.entry(inst.section.project(image)?).or_insert(0) += part.multiplicity;
                if !centralized.contains(&image) {
                    non_centralized_factors += 1;
                }
            } else if index % prime == 0 && coset != Coset::TRIVIAL {
                nontrivial_divisible_factors += 1;
            }
        }
    }
    Ok(TransferTrace {
        traced,
        centralizer_order: p_sub.order(),
        pairs,
        exponents,
        fixed_points: biset::orbit_fixed_points(f, &inst.omega, &p_sub),
        value,
        biset_value: biset::biset_transfer(f, &inst.omega, &inst.section, traced)?,
        nontrivial_divisible_factors,
        non_centralized_factors,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TlReport {
    pub u: ElemId,
    pub cond1: bool,
    pub cond2: Condition2,
    pub cond3: bool,
    pub witness: Option<ElemId>,
    pub trace: TransferTrace,
}

impl TlReport {
    pub fn conditions(&self) -> [bool; 3] {
        [self.cond1, self.cond2.holds, self.cond3]
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.conditions().iter().all(|&c| c)
    }

    pub fn to_json(&self, inst: &TlInstance) -> TlJson {
        let g = inst.system.group();
        let label = |c: &Coset| biset::coset_label(g, &inst.section, *c);
        TlJson {
            u: g.label(self.u),
            t_order: inst.t.order(),
            conditions: self.conditions(),
            i_cosets: self.cond2.cosets.iter().map(label).collect(),
            witness: self.witness.map(|w| g.label(w)),
            trace: TraceJson {
                traced: g.label(self.trace.traced),
                centralizer_order: self.trace.centralizer_order,
                t_size: self.trace.pairs,
                k: self.trace.exponents.iter().map(|(c, &k)| (label(c), k)).collect(),
                fixed_points: self.trace.fixed_points,
                value: label(&self.trace.value),
            },
        }
    }
}

/// The per-instance JSON report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TlJson {
    pub u: String,
    #[serde(rename = "T_order")]
    pub t_order: usize,
    pub conditions: [bool; 3],
    #[serde(rename = "I_cosets")]
    pub i_cosets: Vec<String>,
    pub witness: Option<String>,
    pub trace: TraceJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceJson {
    pub traced: String,
    pub centralizer_order: usize,
    #[serde(rename = "T_size")]
    pub t_size: usize,
    pub k: BTreeMap<String, usize>,
    pub fixed_points: usize,
    pub value: String,
}

/// Checks the hypotheses, looks for a witness and traces the transfer. Fails
/// with a theorem violation only when the hypotheses hold and the conclusion
/// (or the transfer argument behind it) does not.
pub fn tl_verify(inst: &TlInstance) -> Result<TlReport> {
    let cond1 = check_condition_1(inst);
    let cond2 = check_condition_2(inst)?;
    let cond3 = check_condition_3(inst);
    let witness = find_witness(inst);
    let trace = transfer_trace(inst)?;
    let report = TlReport { u: inst.u, cond1, cond2, cond3, witness, trace };
    let label = inst.system.group().label(inst.u);
    if report.hypotheses_hold() && report.witness.is_none() {
        return Err(Error::TheoremViolation(format!("no fully centralized conjugate of {label} in T")));
    }
    if cond1 && report.cond2.holds && report.witness.is_none() && report.trace.value == Coset::TRIVIAL {
        return Err(Error::TheoremViolation(format!("transfer of {label} is trivial with no witness in T")));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicHypotheses {
    pub cyclic: bool,
    pub least_order: bool,
    pub op_closed: bool,
    pub coset_condition: bool,
}

impl CyclicHypotheses {
    pub fn hold(&self) -> bool {
        self.cyclic && self.least_order && self.op_closed && self.coset_condition
    }
}

#[derive(Clone, Debug)]
pub struct CorollaryReport {
    pub hypotheses: CyclicHypotheses,
    /// Present whenever the instance is valid; a claim is made only when the hypotheses hold.
    pub report: Option<TlReport>,
}

/// Every fully centralized `F`-conjugate of `u` lies in `T ∪ uT`.
pub fn coset_condition(inst: &TlInstance) -> bool {
    let uc = inst.section.project(inst.u).expect("u in S");
    inst.system
        .fully_centralized_conjugates(inst.u)
        .into_iter()
        .all(|v| inst.t.contains(v) || inst.section.project(v).expect("v in S") == uc)
}

/// The cyclic corollary. At `p = 2` the coset condition holds automatically.
pub fn corollary_cyclic(inst: &TlInstance) -> Result<CorollaryReport> {
    let section = &inst.section;
    let cyclic = section.cosets().any(|c| section.coset_order(c) as usize == section.order());
    let hypotheses = CyclicHypotheses {
        cyclic,
        least_order: check_condition_1(inst),
        op_closed: check_condition_3(inst),
        coset_condition: inst.system.prime() == 2 || coset_condition(inst),
    };
    let report = if hypotheses.hold() {
        let r = tl_verify(inst)?;
        if r.witness.is_none() {
            return Err(Error::TheoremViolation("cyclic corollary: no witness in T".into()));
        }
        Some(r)
    } else {
        None
    };
    Ok(CorollaryReport { hypotheses, report })
}

#[derive(Clone, Debug)]
pub struct LinIndReport {
    pub i_set: Vec<ElemId>,
    pub independent: bool,
    pub op_closed: bool,
    /// One entry per involution of `S − T`, with its witness.
    pub involutions: Vec<(ElemId, Option<ElemId>)>,
}

impl LinIndReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.independent && self.op_closed
    }

    pub fn all_witnessed(&self) -> bool {
        self.involutions.iter().all(|(_, w)| w.is_some())
    }
}

/// The linear independence corollary at `p = 2`: `𝓘` is every fully
/// centralized involution of `S − T`.
pub fn corollary_linind(f: &FusionSystem, t: &Subgroup) -> Result<LinIndReport> {
    if f.prime() != 2 {
        return Err(Error::Precondition("the linear independence corollary is stated at p = 2".into()));
    }
    let g = f.group();
    let s = f.sylow();
    if t == s {
        return Err(Error::Precondition("T must be a proper subgroup of S".into()));
    }
    let section = AbelianSection::new(g, s, t)?;
    let involutions: Vec<ElemId> = s.elements().iter().copied().filter(|&x| !t.contains(x) && g.element_order(x) == 2).collect();
    let i_set: Vec<ElemId> = involutions
        .iter()
        .copied()
        .filter(|&v| f.is_fully_centralized(&g.closure(&[v])))
        .collect();
    let mut cosets = i_set.iter().map(|&v| section.project(v)).collect::<Result<Vec<_>>>()?;
    cosets.sort_unstable();
    cosets.dedup();
    let independent = section.linearly_independent(&cosets, 2)?;
    let op_closed = f.is_op_closed();
    let omega = biset::characteristic_biset(f);
    let mut witnessed = Vec::new();
    for &u in &involutions {
        let inst = TlInstance::with_biset(f, t, u, omega.clone())?;
        witnessed.push((u, find_witness(&inst)));
    }
    let report = LinIndReport { i_set, independent, op_closed, involutions: witnessed };
    if report.hypotheses_hold() && !report.all_witnessed() {
        return Err(Error::TheoremViolation("linear independence corollary: an involution has no witness in T".into()));
    }
    Ok(report)
}

/// Proper subgroups `T` with `[S,S] ≤ T < S`; these are exactly the proper
/// normal subgroups with abelian quotient.
pub fn abelian_quotient_kernels(f: &FusionSystem) -> Result<Vec<Subgroup>> {
    let g = f.group();
    let s = f.sylow();
    let derived = g.commutator_subgroup(s);
    Ok(lattice::subgroups_between(g, &derived, s)?.into_iter().filter(|t| t != s).collect())
}

/// Every instance `(T, u)` with `T` from [`abelian_quotient_kernels`] and `u ∈ S − T`.
pub fn all_instances(f: &FusionSystem) -> Result<Vec<TlInstance<'_>>> {
    let omega = biset::characteristic_biset(f);
    let mut out = Vec::new();
    for t in abelian_quotient_kernels(f)? {
        for &u in f.sylow().elements() {
            if !t.contains(u) {
                out.push(TlInstance::with_biset(f, &t, u, omega.clone())?);
            }
        }
    }
    Ok(out)
}
