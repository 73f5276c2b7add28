//! Certificate assembly and serialization.
//!
//! A certificate is the full verification record for one instance: every
//! finitely checkable claim gets a named check with a pass/fail status, and
//! the claims that live beyond the homological model (hyperbolization,
//! invariant foliations, commensurability classes) are carried as explicit
//! NOT-CERTIFIED entries so a report can never overstate.
//!
//! Serialization rules: matrices are row-major arrays of decimal strings (so
//! arbitrary-precision entries survive any JSON parser), groups are lists of
//! invariant factors as decimal strings, primes are sorted integer arrays,
//! and the top level carries a schema version. Output is deterministic:
//! identical input and toolkit version produce byte-identical JSON.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abgroup::poly::{char_poly, divides_monic};
use crate::abgroup::{FiniteAbelianGroup, IntMatrix};
use crate::arith::{check_admissible, enumerate_admissible, k_choice_family, PrimeSet};
use crate::construction::{build_instance, genus_table};
use crate::covers::{covers_equivalent, instance_covers, swap_certificate, CoverSpec};
use crate::error::{Error, Result};
use crate::lifting::{certificate_power, conjugacy_certificate, lift_to_surface};
use crate::mapping_torus::{
    conjugate_monodromy_h1_equal, cover_ladder, family_certificate, mapping_torus_h1,
    trace_tables_csv, CoverLadder,
};
use crate::torus::{dilatation, fixed_point_count, fixed_points, TorusMap};

pub const SCHEMA_VERSION: u32 = 1;

pub fn toolkit_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped")]
    Skipped,
    #[serde(rename = "not-certified")]
    NotCertified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "PARTIAL")]
    Partial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl MatrixDto {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        MatrixDto {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDto {
    pub invariant_factors: Vec<String>,
    pub order: String,
    pub display: String,
}

impl GroupDto {
    pub fn from_group(g: &FiniteAbelianGroup) -> Self {
        GroupDto {
            invariant_factors: g
                .invariant_factors()
                .iter()
                .map(|d| d.to_string())
                .collect(),
            order: g.order().to_string(),
            display: g.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub n: u64,
    pub m: u64,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub matrix: Vec<String>,
    #[serde(rename = "K")]
    pub trace_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDto {
    pub n: u64,
    pub m: u64,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    #[serde(rename = "C")]
    pub c: Vec<u64>,
    #[serde(rename = "D")]
    pub d: Vec<u64>,
    pub n_a: u64,
    pub n_b: u64,
    pub n_c: u64,
    pub m_a: u64,
    pub m_b: u64,
    pub m_d: u64,
    pub ratio: u64,
    pub quotient_order: u64,
}

impl PairDto {
    fn from_pair(p: &crate::arith::AdmissiblePair) -> Self {
        PairDto {
            n: p.n(),
            m: p.m(),
            a: p.a_set().as_slice().to_vec(),
            b: p.b_set().as_slice().to_vec(),
            c: p.c_set().as_slice().to_vec(),
            d: p.d_set().as_slice().to_vec(),
            n_a: p.n_a(),
            n_b: p.n_b(),
            n_c: p.n_c(),
            m_a: p.m_a(),
            m_b: p.m_b(),
            m_d: p.m_d(),
            ratio: p.ratio(),
            quotient_order: p.quotient_order(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityRecord {
    pub admissible: bool,
    pub pair: Option<PairDto>,
    pub rejection: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionRecord {
    pub deck_group: GroupDto,
    pub h1_generators: Vec<Vec<u64>>,
    pub h2_generators: Vec<Vec<u64>>,
    pub h1: GroupDto,
    pub h2: GroupDto,
    pub quotient1: GroupDto,
    pub quotient2: GroupDto,
    pub witness_prime: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenusRecord {
    pub base: u64,
    pub intermediate: u64,
    pub total: u64,
    pub euler_base: i64,
    pub euler_intermediate: i64,
    pub euler_total: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverDto {
    pub orders: Vec<u64>,
    pub images: Vec<Vec<u64>>,
    pub degree: String,
    pub connected: bool,
    pub genus: Option<u64>,
    pub kernel: MatrixDto,
}

impl CoverDto {
    fn from_spec(spec: &CoverSpec) -> Self {
        CoverDto {
            orders: spec.orders().to_vec(),
            images: spec.images().to_vec(),
            degree: spec.degree().to_string(),
            connected: spec.is_connected(),
            genus: spec.cover_genus().ok(),
            kernel: MatrixDto::from_matrix(&spec.kernel_lattice()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapDto {
    pub tau_order_two: bool,
    pub tau_symplectic: bool,
    pub kernels_exchanged: bool,
    pub literal_after_factor_swap: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoversRecord {
    pub full: CoverDto,
    pub phi1: CoverDto,
    pub phi2: CoverDto,
    pub phi1_phi2_equivalent: bool,
    pub swap: SwapDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDto {
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsRecord {
    pub matrix: MatrixDto,
    pub trace: String,
    pub anosov: bool,
    pub dilatation: Option<f64>,
    pub discriminant: Option<String>,
    pub fixed_point_counts: Vec<String>,
    pub k_fix: Option<u64>,
    pub fixed_points_at_k_fix: Option<Vec<PointDto>>,
    /// Point lists are capped at 64 entries; the counts stay exact.
    pub fixed_points_truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftingRecord {
    pub word: String,
    pub word_length: usize,
    pub sign: i8,
    pub matrix4: MatrixDto,
    pub symplectic: bool,
    pub commutes_with_involution: bool,
    pub char_poly_source: Vec<String>,
    pub char_poly_lift: Vec<String>,
    pub char_poly_divides: bool,
    pub k_lift_phi1: u64,
    pub k_lift_phi2: u64,
    pub k_lift_full: u64,
    pub k_total: u64,
    pub involution_commutes_with_power: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderDto {
    pub degree_total_over_intermediate: String,
    pub degree_intermediate_over_base: u64,
    pub degree_total_over_base: u64,
    pub fiber_genus_total: u64,
    pub fiber_genus_intermediate: u64,
    pub fiber_genus_base: u64,
}

impl LadderDto {
    fn from_ladder(l: &CoverLadder) -> Self {
        LadderDto {
            degree_total_over_intermediate: l.degree_total_over_intermediate.to_string(),
            degree_intermediate_over_base: l.degree_intermediate_over_base,
            degree_total_over_base: l.degree_total_over_base,
            fiber_genus_total: l.fiber_genus_total,
            fiber_genus_intermediate: l.fiber_genus_intermediate,
            fiber_genus_base: l.fiber_genus_base,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeManifoldRecord {
    pub monodromy_power: u64,
    pub h1_free_rank: u64,
    pub h1_torsion: GroupDto,
    pub conjugate_monodromy_matrices_equal: bool,
    pub conjugate_monodromy_h1_isomorphic: bool,
    pub ladder: LadderDto,
    pub not_certified: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub input: InputEcho,
    pub admissibility: AdmissibilityRecord,
    pub construction: Option<ConstructionRecord>,
    pub genus: Option<GenusRecord>,
    pub covers: Option<CoversRecord>,
    pub dynamics: Option<DynamicsRecord>,
    pub lifting: Option<LiftingRecord>,
    pub three_manifold: Option<ThreeManifoldRecord>,
    pub checks: Vec<CheckRecord>,
    pub verdict: Verdict,
}

/// Ongoing claims that the toolkit cannot check at homology level; they are
/// listed on every certificate with a NOT-CERTIFIED status.
const NOT_CERTIFIED: [(&str, &str); 4] = [
    (
        "mapping-tori-hyperbolic",
        "hyperbolicity of the mapping tori (needs geometrization, out of reach of this model)",
    ),
    (
        "lifts-pseudo-anosov-foliations",
        "invariant-foliation certification of the lifted maps (only homological consequences are checked)",
    ),
    (
        "commensurability-class-separation",
        "whether the constructed manifolds fall into infinitely many commensurability classes",
    ),
    (
        "covering-mapping-torus-homology",
        "homology of the covering mapping tori (needs the action on homology of the covering surfaces)",
    ),
];

struct Checks {
    records: Vec<CheckRecord>,
    alive: bool,
}

impl Checks {
    fn new() -> Self {
        Checks {
            records: Vec::new(),
            alive: true,
        }
    }

    fn push(&mut self, name: &str, ok: bool, detail: String) -> bool {
        let status = if !self.alive {
            CheckStatus::Skipped
        } else if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.records.push(CheckRecord {
            name: name.to_string(),
            status,
            detail: if status == CheckStatus::Skipped {
                "skipped after an earlier failure".to_string()
            } else {
                detail
            },
        });
        if !ok {
            self.alive = false;
        }
        self.alive
    }

    /// A check that is always evaluated and does not gate the ones after it.
    fn push_independent(&mut self, name: &str, ok: bool, detail: String) {
        let prior = self.alive;
        self.alive = true;
        self.push(name, ok, detail);
        self.alive = prior;
    }

    fn skip(&mut self, name: &str) {
        self.records.push(CheckRecord {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            detail: "skipped after an earlier failure".to_string(),
        });
    }

    fn finish(mut self) -> (Vec<CheckRecord>, Verdict) {
        for (name, what) in NOT_CERTIFIED {
            self.records.push(CheckRecord {
                name: name.to_string(),
                status: CheckStatus::NotCertified,
                detail: what.to_string(),
            });
        }
        let verdict = if self.records.iter().any(|r| r.status == CheckStatus::Fail) {
            Verdict::Fail
        } else if self
            .records
            .iter()
            .any(|r| r.status == CheckStatus::Skipped)
        {
            Verdict::Partial
        } else {
            Verdict::Pass
        };
        (self.records, verdict)
    }
}

/// Input of the full verification pipeline.
#[derive(Clone, Debug)]
pub struct VerifyRequest {
    pub n: u64,
    pub m: u64,
    pub a: PrimeSet,
    pub b: PrimeSet,
    pub matrix: [BigInt; 4],
    pub trace_bound: u64,
}

const VERIFY_CHECKS_AFTER_ADMISSIBILITY: [&str; 16] = [
    "subgroup-orders-equal",
    "subgroups-nonisomorphic",
    "quotients-cyclic-equal",
    "genus-ladder",
    "covers-connected",
    "covers-nonequivalent",
    "involution-swaps-covers",
    "determinant-one",
    "anosov",
    "power-fixes-two-points",
    "lift-structural-invariants",
    "lift-powers-sound",
    "lift-power-divisibility",
    "involution-commutes-with-power",
    "mapping-torus-homology",
    "conjugate-monodromy-homology",
];

/// Runs the whole pipeline and assembles the certificate. Failures become
/// failed checks, never panics or errors; downstream checks are marked
/// skipped once a stage fails.
pub fn verify(req: &VerifyRequest) -> Certificate {
    let mut checks = Checks::new();

    let input = InputEcho {
        n: req.n,
        m: req.m,
        a: req.a.as_slice().to_vec(),
        b: req.b.as_slice().to_vec(),
        matrix: req.matrix.iter().map(|e| e.to_string()).collect(),
        trace_bound: req.trace_bound,
    };

    // admissibility
    let (pair, rejection) = match check_admissible(req.n, req.m, &req.a, &req.b) {
        Ok(pair) => {
            checks.push(
                "admissible",
                true,
                format!(
                    "(n, m) = ({}, {}) admissible for A={}, B={}, ratio {}",
                    req.n,
                    req.m,
                    pair.a_set(),
                    pair.b_set(),
                    pair.ratio()
                ),
            );
            (Some(pair), None)
        }
        Err(rejection) => {
            checks.push("admissible", false, rejection.to_string());
            (None, Some(rejection.to_string()))
        }
    };
    let admissibility = AdmissibilityRecord {
        admissible: pair.is_some(),
        pair: pair.as_ref().map(PairDto::from_pair),
        rejection,
    };

    if pair.is_none() {
        for name in VERIFY_CHECKS_AFTER_ADMISSIBILITY {
            checks.skip(name);
        }
        let (records, verdict) = checks.finish();
        return Certificate {
            schema_version: SCHEMA_VERSION,
            toolkit_version: toolkit_version(),
            input,
            admissibility,
            construction: None,
            genus: None,
            covers: None,
            dynamics: None,
            lifting: None,
            three_manifold: None,
            checks: records,
            verdict,
        };
    }
    let pair = pair.expect("checked above");

    // construction: the builder re-verifies the subgroup identities itself
    let inst = build_instance(&pair);
    let construction = match &inst {
        Ok(inst) => {
            let expected = pair.quotient_order();
            checks.push(
                "subgroup-orders-equal",
                true,
                format!(
                    "|H1| = |H2| = {} = nm/(n_B m_A)",
                    inst.h1_structure().order()
                ),
            );
            checks.push(
                "subgroups-nonisomorphic",
                true,
                format!(
                    "H1 = {} vs H2 = {}, witness prime {}",
                    inst.h1_structure(),
                    inst.h2_structure(),
                    inst.witness_prime()
                ),
            );
            checks.push(
                "quotients-cyclic-equal",
                true,
                format!("G/H1 = G/H2 = {} of order {}", inst.quotient1(), expected),
            );
            Some(ConstructionRecord {
                deck_group: GroupDto::from_group(inst.deck_group()),
                h1_generators: inst.h1().generators().to_vec(),
                h2_generators: inst.h2().generators().to_vec(),
                h1: GroupDto::from_group(inst.h1_structure()),
                h2: GroupDto::from_group(inst.h2_structure()),
                quotient1: GroupDto::from_group(inst.quotient1()),
                quotient2: GroupDto::from_group(inst.quotient2()),
                witness_prime: inst.witness_prime(),
            })
        }
        Err(e) => {
            checks.push("subgroup-orders-equal", false, e.to_string());
            checks.skip("subgroups-nonisomorphic");
            checks.skip("quotients-cyclic-equal");
            None
        }
    };

    let genus = inst.as_ref().ok().and_then(|inst| match genus_table(inst) {
        Ok(t) => {
            checks.push(
                "genus-ladder",
                true,
                format!(
                    "genus {} over {} over {}",
                    t.genus_total, t.genus_intermediate, t.genus_base
                ),
            );
            Some(GenusRecord {
                base: t.genus_base,
                intermediate: t.genus_intermediate,
                total: t.genus_total,
                euler_base: t.euler_base as i64,
                euler_intermediate: t.euler_intermediate as i64,
                euler_total: t.euler_total as i64,
            })
        }
        Err(e) => {
            checks.push("genus-ladder", false, e.to_string());
            None
        }
    });
    if inst.is_err() {
        checks.skip("genus-ladder");
    }

    // covers
    let covers_data = inst.as_ref().ok().map(instance_covers);
    let covers = match (&inst, &covers_data) {
        (Ok(inst), Some(cv)) => {
            let connected =
                cv.full.is_connected() && cv.phi1.is_connected() && cv.phi2.is_connected();
            checks.push(
                "covers-connected",
                connected,
                format!(
                    "degrees {}, {}, {}",
                    cv.full.degree(),
                    cv.phi1.degree(),
                    cv.phi2.degree()
                ),
            );
            let equivalent = covers_equivalent(&cv.phi1, &cv.phi2).unwrap_or(true);
            checks.push(
                "covers-nonequivalent",
                !equivalent,
                "kernel lattices differ".to_string(),
            );
            let swap = swap_certificate(inst);
            let swap_dto = match &swap {
                Ok(s) => {
                    checks.push(
                        "involution-swaps-covers",
                        true,
                        "phi2 = phi1 after the handle swap; involution of order 2, symplectic"
                            .to_string(),
                    );
                    SwapDto {
                        tau_order_two: s.tau_order_two,
                        tau_symplectic: s.tau_symplectic,
                        kernels_exchanged: s.kernels_exchanged,
                        literal_after_factor_swap: s.literal_after_factor_swap,
                    }
                }
                Err(e) => {
                    checks.push("involution-swaps-covers", false, e.to_string());
                    SwapDto {
                        tau_order_two: false,
                        tau_symplectic: false,
                        kernels_exchanged: false,
                        literal_after_factor_swap: false,
                    }
                }
            };
            Some(CoversRecord {
                full: CoverDto::from_spec(&cv.full),
                phi1: CoverDto::from_spec(&cv.phi1),
                phi2: CoverDto::from_spec(&cv.phi2),
                phi1_phi2_equivalent: equivalent,
                swap: swap_dto,
            })
        }
        _ => {
            checks.skip("covers-connected");
            checks.skip("covers-nonequivalent");
            checks.skip("involution-swaps-covers");
            None
        }
    };

    // dynamics
    let matrix = IntMatrix::from_fn(2, 2, |i, j| req.matrix[2 * i + j].clone());
    let map = TorusMap::new(matrix.clone());
    let dynamics = match &map {
        Ok(map) => {
            checks.push("determinant-one", true, "det = 1".to_string());
            let anosov = map.is_anosov();
            checks.push("anosov", anosov, format!("trace {}", map.trace()));
            let (dil, disc) = match dilatation(map) {
                Ok(d) => (Some(d.value), Some(d.discriminant.to_string())),
                Err(_) => (None, None),
            };
            let (k_fix, counts, points, truncated) = if anosov {
                let k = crate::torus::min_power_two_fixed(map).expect("anosov");
                let counts: Vec<String> = (1..=k)
                    .map(|j| fixed_point_count(map, j).expect("anosov power").to_string())
                    .collect();
                let mut truncated = false;
                let pts = fixed_points(map, k).ok().map(|pts| {
                    truncated = pts.len() > 64;
                    pts.iter()
                        .take(64)
                        .map(|p| PointDto {
                            x: p.x.to_string(),
                            y: p.y.to_string(),
                        })
                        .collect::<Vec<_>>()
                });
                checks.push(
                    "power-fixes-two-points",
                    true,
                    format!("k_fix = {k}, counts {counts:?}"),
                );
                (Some(k), counts, pts, truncated)
            } else {
                checks.skip("power-fixes-two-points");
                (None, Vec::new(), None, false)
            };
            Some(DynamicsRecord {
                matrix: MatrixDto::from_matrix(map.matrix()),
                trace: map.trace().to_string(),
                anosov,
                dilatation: dil,
                discriminant: disc,
                fixed_point_counts: counts,
                k_fix,
                fixed_points_at_k_fix: points,
                fixed_points_truncated: truncated,
            })
        }
        Err(e) => {
            checks.push("determinant-one", false, e.to_string());
            checks.skip("anosov");
            checks.skip("power-fixes-two-points");
            Some(DynamicsRecord {
                matrix: MatrixDto::from_matrix(&matrix),
                trace: (matrix.get(0, 0) + matrix.get(1, 1)).to_string(),
                anosov: false,
                dilatation: None,
                discriminant: None,
                fixed_point_counts: Vec::new(),
                k_fix: None,
                fixed_points_at_k_fix: None,
                fixed_points_truncated: false,
            })
        }
    };

    // lifting
    let lift = map.as_ref().ok().map(lift_to_surface);
    let mut lifting = None;
    let mut three_manifold = None;
    match (inst.as_ref().ok(), covers_data.as_ref(), lift) {
        (Some(inst), Some(cv), Some(Ok(f))) if checks.alive => {
            let source_poly = char_poly(f.source().matrix());
            let lift_poly = char_poly(f.matrix4());
            let divides = divides_monic(&source_poly, &lift_poly);
            let symplectic = crate::covers::is_symplectic(f.matrix4());
            let commutes = crate::lifting::commutes_with_tau(f.matrix4());
            checks.push(
                "lift-structural-invariants",
                symplectic && commutes && divides,
                format!("word {} of length {}", f.word(), f.word().len()),
            );
            match certificate_power(cv, &f) {
                Ok(powers) => {
                    checks.push(
                        "lift-powers-sound",
                        true,
                        format!(
                            "k_fix = {}, k_lift = ({}, {}, {}), k_total = {}",
                            powers.k_fix,
                            powers.k_lift_phi1,
                            powers.k_lift_phi2,
                            powers.k_lift_full,
                            powers.k_total
                        ),
                    );
                    checks.push(
                        "lift-power-divisibility",
                        true,
                        "per-cover lifting powers divide the full one".to_string(),
                    );
                    let conj = conjugacy_certificate(inst, &f, powers.k_total);
                    checks.push(
                        "involution-commutes-with-power",
                        conj.is_ok(),
                        match &conj {
                            Ok(c) => format!("power {}", c.power),
                            Err(e) => e.to_string(),
                        },
                    );
                    lifting = Some(LiftingRecord {
                        word: f.word().to_string(),
                        word_length: f.word().len(),
                        sign: f.word().sign(),
                        matrix4: MatrixDto::from_matrix(f.matrix4()),
                        symplectic,
                        commutes_with_involution: commutes,
                        char_poly_source: source_poly.iter().map(|c| c.to_string()).collect(),
                        char_poly_lift: lift_poly.iter().map(|c| c.to_string()).collect(),
                        char_poly_divides: divides,
                        k_lift_phi1: powers.k_lift_phi1,
                        k_lift_phi2: powers.k_lift_phi2,
                        k_lift_full: powers.k_lift_full,
                        k_total: powers.k_total,
                        involution_commutes_with_power: conj.is_ok(),
                    });

                    // base mapping torus of the chosen power
                    let monodromy = f.power(powers.k_total);
                    match (
                        mapping_torus_h1(&monodromy),
                        conjugate_monodromy_h1_equal(&f, powers.k_total),
                        cover_ladder(inst),
                    ) {
                        (Ok(inv), Ok(conj_report), Ok(ladder)) => {
                            checks.push(
                                "mapping-torus-homology",
                                true,
                                format!("h1 = Z^{} + {}", inv.h1_free_rank, inv.h1_torsion),
                            );
                            checks.push(
                                "conjugate-monodromy-homology",
                                conj_report.h1_isomorphic,
                                if conj_report.matrices_equal {
                                    "conjugated monodromy is literally equal".to_string()
                                } else {
                                    "conjugated monodromy has isomorphic homology".to_string()
                                },
                            );
                            three_manifold = Some(ThreeManifoldRecord {
                                monodromy_power: powers.k_total,
                                h1_free_rank: inv.h1_free_rank as u64,
                                h1_torsion: GroupDto::from_group(&inv.h1_torsion),
                                conjugate_monodromy_matrices_equal: conj_report.matrices_equal,
                                conjugate_monodromy_h1_isomorphic: conj_report.h1_isomorphic,
                                ladder: LadderDto::from_ladder(&ladder),
                                not_certified: NOT_CERTIFIED
                                    .iter()
                                    .map(|(n, _)| n.to_string())
                                    .collect(),
                            });
                        }
                        (h1, conj_r, ladder) => {
                            let detail = [
                                h1.err().map(|e| e.to_string()),
                                conj_r.err().map(|e| e.to_string()),
                                ladder.err().map(|e| e.to_string()),
                            ]
                            .into_iter()
                            .flatten()
                            .collect::<Vec<_>>()
                            .join("; ");
                            checks.push("mapping-torus-homology", false, detail);
                            checks.skip("conjugate-monodromy-homology");
                        }
                    }
                }
                Err(e) => {
                    checks.push("lift-powers-sound", false, e.to_string());
                    checks.skip("lift-power-divisibility");
                    checks.skip("involution-commutes-with-power");
                    checks.skip("mapping-torus-homology");
                    checks.skip("conjugate-monodromy-homology");
                }
            }
        }
        (_, _, Some(Err(e))) => {
            checks.push("lift-structural-invariants", false, e.to_string());
            for name in [
                "lift-powers-sound",
                "lift-power-divisibility",
                "involution-commutes-with-power",
                "mapping-torus-homology",
                "conjugate-monodromy-homology",
            ] {
                checks.skip(name);
            }
        }
        _ => {
            for name in [
                "lift-structural-invariants",
                "lift-powers-sound",
                "lift-power-divisibility",
                "involution-commutes-with-power",
                "mapping-torus-homology",
                "conjugate-monodromy-homology",
            ] {
                checks.skip(name);
            }
        }
    }

    let (records, verdict) = checks.finish();
    Certificate {
        schema_version: SCHEMA_VERSION,
        toolkit_version: toolkit_version(),
        input,
        admissibility,
        construction,
        genus,
        covers,
        dynamics,
        lifting,
        three_manifold,
        checks: records,
        verdict,
    }
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Internal(format!("certificate parse: {e}")))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "certificate (schema {}, toolkit {})\n",
            self.schema_version, self.toolkit_version
        ));
        out.push_str(&format!(
            "input: n={} m={} A={{{}}} B={{{}}} matrix=[{}] K={}\n",
            self.input.n,
            self.input.m,
            join_u64(&self.input.a),
            join_u64(&self.input.b),
            self.input.matrix.join(","),
            self.input.trace_bound
        ));
        if let Some(c) = &self.construction {
            out.push_str(&format!(
                "objects: G = {}, H1 = {}, H2 = {}, G/H_i = {}\n",
                c.deck_group.display, c.h1.display, c.h2.display, c.quotient1.display
            ));
        }
        if let Some(g) = &self.genus {
            out.push_str(&format!(
                "genera: base {}, intermediate {}, total {}\n",
                g.base, g.intermediate, g.total
            ));
        }
        if let Some(l) = &self.lifting {
            out.push_str(&format!(
                "powers: k_fix {} | k_lift ({}, {}, {}) | k_total {}\n",
                self.dynamics
                    .as_ref()
                    .and_then(|d| d.k_fix)
                    .map_or("-".to_string(), |k| k.to_string()),
                l.k_lift_phi1,
                l.k_lift_phi2,
                l.k_lift_full,
                l.k_total
            ));
        }
        out.push('\n');
        for check in &self.checks {
            out.push_str(&render_check_line(check));
        }
        out.push_str(&format!(
            "\nverdict: {}\n",
            match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Partial => "PARTIAL",
            }
        ));
        out
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            _ => 1,
        }
    }
}

fn join_u64(v: &[u64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn render_check_line(check: &CheckRecord) -> String {
    let status = match check.status {
        CheckStatus::Pass => "PASS",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "SKIPPED",
        CheckStatus::NotCertified => "NOT-CERTIFIED",
    };
    let mut label = check.name.replace('-', " ");
    label.push(' ');
    format!("{label:.<46} {status:<13}  {}\n", check.detail)
}

// -------------------------------------------------------------------------
// enumeration listing

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingRow {
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub ratio: u64,
    pub quotient_order: u64,
    pub subgroup_order: String,
    pub h1: GroupDto,
    pub h2: GroupDto,
    pub genus_total: u64,
    pub genus_intermediate: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationListing {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub n: u64,
    pub m: u64,
    pub count: usize,
    pub splittings: Vec<SplittingRow>,
}

pub fn enumerate_listing(n: u64, m: u64) -> Result<EnumerationListing> {
    let mut splittings = Vec::new();
    for pair in enumerate_admissible(n, m) {
        let inst = build_instance(&pair)?;
        let table = genus_table(&inst)?;
        splittings.push(SplittingRow {
            a: pair.a_set().as_slice().to_vec(),
            b: pair.b_set().as_slice().to_vec(),
            ratio: pair.ratio(),
            quotient_order: pair.quotient_order(),
            subgroup_order: inst.h1_structure().order().to_string(),
            h1: GroupDto::from_group(inst.h1_structure()),
            h2: GroupDto::from_group(inst.h2_structure()),
            genus_total: table.genus_total,
            genus_intermediate: table.genus_intermediate,
        });
    }
    Ok(EnumerationListing {
        schema_version: SCHEMA_VERSION,
        toolkit_version: toolkit_version(),
        n,
        m,
        count: splittings.len(),
        splittings,
    })
}

impl EnumerationListing {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("listing serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "admissible splittings of (n, m) = ({}, {}): {}\n",
            self.n, self.m, self.count
        );
        for row in &self.splittings {
            out.push_str(&format!(
                "A={{{}}} B={{{}}}  ratio {}  |H_i| {}  H1 {}  H2 {}  genus {} over {}\n",
                join_u64(&row.a),
                join_u64(&row.b),
                row.ratio,
                row.subgroup_order,
                row.h1.display,
                row.h2.display,
                row.genus_total,
                row.genus_intermediate,
            ));
        }
        out
    }
}

// -------------------------------------------------------------------------
// family certificate

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub kernel_phi1: MatrixDto,
    pub kernel_phi2: MatrixDto,
    pub ladder: LadderDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceDto {
    pub first: usize,
    pub second: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub primes: Vec<u64>,
    pub n: u64,
    pub m: u64,
    pub family_size: usize,
    pub splittings_found: usize,
    pub kernel_pairs_distinct: bool,
    pub members: Vec<FamilyMember>,
    pub matrices: Vec<MatrixDto>,
    pub trace_bound: u64,
    pub trace_tables: Vec<Vec<String>>,
    pub independence: Vec<IndependenceDto>,
    pub checks: Vec<CheckRecord>,
    pub verdict: Verdict,
}

pub fn family(primes: &PrimeSet, maps: &[TorusMap], trace_bound: u64) -> Result<FamilyCertificate> {
    let fam = k_choice_family(primes)?;
    let instances = fam
        .splittings
        .iter()
        .map(build_instance)
        .collect::<Result<Vec<_>>>()?;
    let report = family_certificate(&instances, maps, trace_bound)?;

    let mut members = Vec::new();
    for inst in &instances {
        let cv = instance_covers(inst);
        members.push(FamilyMember {
            a: inst.pair().a_set().as_slice().to_vec(),
            b: inst.pair().b_set().as_slice().to_vec(),
            kernel_phi1: MatrixDto::from_matrix(&cv.phi1.kernel_lattice()),
            kernel_phi2: MatrixDto::from_matrix(&cv.phi2.kernel_lattice()),
            ladder: LadderDto::from_ladder(&cover_ladder(inst)?),
        });
    }

    let mut checks = Checks::new();
    checks.push_independent(
        "family-splittings",
        report.splittings_found >= report.family_size,
        format!(
            "{} admissible splittings over (n, m) = ({}, {}), family of {}",
            report.splittings_found, report.n, report.m, report.family_size
        ),
    );
    checks.push_independent(
        "kernel-pairs-distinct",
        report.kernel_pairs_distinct,
        "kernel-lattice pairs are pairwise distinct".to_string(),
    );
    let all_independent = report.independence.iter().all(|e| e.certified);
    checks.push_independent(
        "power-independence",
        all_independent,
        if report.independence.is_empty() {
            "no pairs to compare".to_string()
        } else if all_independent {
            format!(
                "trace tables disjoint up to K = {} for all {} pairs",
                report.trace_bound,
                report.independence.len()
            )
        } else {
            "inconclusive pairs flagged: shared traces found".to_string()
        },
    );
    let verdict = if checks.records.iter().any(|r| r.status == CheckStatus::Fail) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };

    Ok(FamilyCertificate {
        schema_version: SCHEMA_VERSION,
        toolkit_version: toolkit_version(),
        primes: primes.as_slice().to_vec(),
        n: report.n,
        m: report.m,
        family_size: report.family_size,
        splittings_found: report.splittings_found,
        kernel_pairs_distinct: report.kernel_pairs_distinct,
        members,
        matrices: maps
            .iter()
            .map(|m| MatrixDto::from_matrix(m.matrix()))
            .collect(),
        trace_bound: report.trace_bound,
        trace_tables: report
            .trace_tables
            .iter()
            .map(|t| t.iter().map(|x| x.to_string()).collect())
            .collect(),
        independence: report
            .independence
            .iter()
            .map(|e| IndependenceDto {
                first: e.first,
                second: e.second,
                certified: e.certified,
            })
            .collect(),
        checks: checks.records,
        verdict,
    })
}

impl FamilyCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("family serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "family over primes {{{}}}: (n, m) = ({}, {})\n",
            join_u64(&self.primes),
            self.n,
            self.m
        );
        out.push_str(&format!(
            "family size {}, splittings found {}\n\n",
            self.family_size, self.splittings_found
        ));
        for check in &self.checks {
            out.push_str(&render_check_line(check));
        }
        out.push_str(&format!(
            "\nverdict: {}\n",
            match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Partial => "PARTIAL",
            }
        ));
        out
    }

    pub fn trace_csv(&self) -> String {
        let tables: Vec<Vec<BigInt>> = self
            .trace_tables
            .iter()
            .map(|t| {
                t.iter()
                    .map(|s| s.parse().expect("serialized traces are integers"))
                    .collect()
            })
            .collect();
        trace_tables_csv(&tables)
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            _ => 1,
        }
    }
}
