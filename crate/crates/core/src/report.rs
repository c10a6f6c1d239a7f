//! Serializable reports, schema `weylpert/1`.
//!
//! Exact values are strings (`"3/4"`, `"1/2+1/4√2"`) with an `f64` rendering
//! next to them. Reports are emitted through [`to_json`], which sorts keys,
//! so parsing and re-serializing is byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harmonic::{exact_harmonic, HarmonicCase};
use crate::lie::{
    count_generators, count_generators_floor_convention, AlgebraElement, LieAlgebra, Parity, StructureConstants,
};
use crate::number::NumberPolynomial;
use crate::oracle::ComparisonReport;
use crate::perturbation::PerturbationResult;
use crate::potentials::{ModeResult, MultimodeResult, SeriesKind};
use crate::radical::Radical2Scalar;

pub const SCHEMA: &str = "weylpert/1";

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let value = serde_json::to_value(report).map_err(|e| crate::Error::Validation(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| crate::Error::Validation(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub value: String,
    pub decimal: f64,
}

impl ExactValue {
    pub fn new(value: &Radical2Scalar) -> Self {
        Self { value: value.to_string(), decimal: value.to_f64() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaEntry {
    pub order: usize,
    pub p: u32,
    pub q: u32,
    pub value: String,
    pub decimal: f64,
}

/// One λ-order of a number polynomial in both bases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesOrder {
    pub order: usize,
    /// Coefficients of `i!·C(N, i)`, `i = 0, 1, …`
    pub binomial_basis: Vec<ExactValue>,
    /// Coefficients of `Nᵐ`, `m = 0, 1, …`
    pub monomial_basis: Vec<ExactValue>,
}

pub fn series_orders(poly: &NumberPolynomial<Radical2Scalar>) -> Vec<SeriesOrder> {
    let mono = poly.to_monomial_basis();
    (1..=poly.truncation_order())
        .map(|j| SeriesOrder {
            order: j,
            binomial_basis: poly.order_coefficients(j).iter().map(ExactValue::new).collect(),
            monomial_basis: mono[j].iter().map(ExactValue::new).collect(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub level: u64,
    /// `[n + 1/2, c₁, c₂, …]`
    pub coefficients: Vec<ExactValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicCheck {
    pub formula: String,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub coupling: String,
    pub n: Option<u32>,
    pub k: usize,
    pub alphas: Vec<AlphaEntry>,
    pub lambda_operator: Vec<SeriesOrder>,
    pub eigenvalue_series: Vec<SeriesOrder>,
    pub dressing_rounds: usize,
    pub residual_zero: bool,
    pub levels: Vec<LevelEntry>,
    pub harmonic: Option<HarmonicCheck>,
}

impl PerturbationReport {
    pub fn new(coupling: &str, result: &PerturbationResult<Radical2Scalar>, levels: &[u64]) -> Self {
        let harmonic = result.n.and_then(HarmonicCase::from_power).and_then(|case| {
            let unit = result.perturbation == crate::hamiltonian::potential_term(result.n?, result.order);
            unit.then(|| {
                let spectrum = exact_harmonic(case);
                HarmonicCheck {
                    formula: spectrum.formula().into(),
                    agrees: spectrum.series(result.order) == result.eigenvalue_series,
                }
            })
        });
        Self {
            coupling: coupling.into(),
            n: result.n,
            k: result.order,
            alphas: result
                .generator
                .alphas()
                .into_iter()
                .map(|(order, p, q, c)| AlphaEntry { order, p, q, decimal: c.to_f64(), value: c.to_string() })
                .collect(),
            lambda_operator: series_orders(&result.lambda_operator),
            eigenvalue_series: series_orders(&result.eigenvalue_series),
            dressing_rounds: result.dressing_rounds,
            residual_zero: result.residual.is_zero(),
            levels: levels
                .iter()
                .map(|&n| LevelEntry {
                    level: n,
                    coefficients: result.level_series(n).coeffs().iter().map(ExactValue::new).collect(),
                })
                .collect(),
            harmonic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesInfo {
    pub kind: SeriesKind,
    pub cutoff: u32,
    pub tail_bound_ground: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub index: usize,
    pub name: String,
    pub series: Option<SeriesInfo>,
    pub couplings: Vec<PerturbationReport>,
}

impl ModeReport {
    pub fn new(mode: &ModeResult, levels: &[u64]) -> Self {
        Self {
            index: mode.index,
            name: mode.name.clone(),
            series: mode.series.as_ref().map(|s| SeriesInfo {
                kind: s.kind,
                cutoff: s.cutoff,
                tail_bound_ground: s.tail_bound_ground,
            }),
            couplings: mode.results.iter().map(|(name, r)| PerturbationReport::new(name, r, levels)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalEnergy {
    pub levels: Vec<u64>,
    pub constant: ExactValue,
    /// Per coupling, coefficients of `couplingʲ` for `j = 1..k`.
    pub couplings: BTreeMap<String, Vec<ExactValue>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: String,
    pub command: String,
    pub potential: String,
    pub order: usize,
    pub modes: Vec<ModeReport>,
    pub totals: Vec<TotalEnergy>,
}

impl SolveReport {
    /// Totals are given for `(n, n, …, n)` at every requested level.
    pub fn new(potential: &str, result: &MultimodeResult, levels: &[u64]) -> Result<Self> {
        let mut totals = Vec::new();
        for &n in levels {
            let tuple = vec![n; result.modes.len()];
            let form = result.energy_form(&tuple)?;
            totals.push(TotalEnergy {
                levels: tuple,
                constant: ExactValue::new(&form.constant),
                couplings: form
                    .couplings
                    .iter()
                    .map(|(name, s)| (name.clone(), s.coeffs().iter().skip(1).map(ExactValue::new).collect()))
                    .collect(),
            });
        }
        Ok(Self {
            schema: SCHEMA.into(),
            command: "solve".into(),
            potential: potential.into(),
            order: result.order,
            modes: result.modes.iter().map(|m| ModeReport::new(m, levels)).collect(),
            totals,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub index: usize,
    pub kind: String,
    pub label: String,
    pub lambda_power: usize,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub parity: Option<Parity>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureEntry {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub lambda_power: usize,
    pub coefficient: String,
    pub decimal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountCheck {
    /// `(κ+1)κ + 3` with `κ = ⌈n/2⌉`
    pub expected: usize,
    /// Same with `κ = ⌊n/2⌋`
    pub floor_convention: usize,
    pub matches: bool,
    pub matches_floor_convention: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub schema: String,
    pub command: String,
    pub n: u32,
    pub order: usize,
    pub size: usize,
    pub count: Option<CountCheck>,
    pub closed: bool,
    pub scalar_constants: bool,
    pub basis: Vec<BasisEntry>,
    pub structure_constants: Vec<StructureEntry>,
}

impl AlgebraReport {
    pub fn new(algebra: &LieAlgebra<Radical2Scalar>, constants: &StructureConstants<Radical2Scalar>) -> Self {
        let n = algebra.potential_power();
        let size = algebra.size();
        let count = count_generators(n).ok().map(|expected| {
            let floor_convention = count_generators_floor_convention(n);
            CountCheck {
                expected,
                floor_convention,
                matches: expected == size,
                matches_floor_convention: floor_convention == size,
            }
        });
        let basis = algebra
            .elements()
            .iter()
            .enumerate()
            .map(|(index, e)| {
                let (kind, p, q, parity) = match e {
                    AlgebraElement::Free => ("free", None, None, None),
                    AlgebraElement::Perturbed => ("perturbed", None, None, None),
                    AlgebraElement::Central => ("central", None, None, None),
                    AlgebraElement::Pair(b) => ("pair", Some(b.high), Some(b.low), Some(b.parity)),
                    AlgebraElement::Diagonal { power, .. } => ("diagonal", Some(*power), Some(*power), None),
                };
                BasisEntry {
                    index,
                    kind: kind.into(),
                    label: algebra.label(index),
                    lambda_power: e.lambda_power(),
                    p,
                    q,
                    parity,
                }
            })
            .collect();
        Self {
            schema: SCHEMA.into(),
            command: "algebra".into(),
            n,
            order: algebra.order(),
            size,
            count,
            closed: true,
            scalar_constants: constants.is_scalar(),
            basis,
            structure_constants: constants
                .triples()
                .into_iter()
                .map(|(i, j, m, s, c)| StructureEntry {
                    i,
                    j,
                    m,
                    lambda_power: s,
                    decimal: c.to_f64(),
                    coefficient: c.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub mode: String,
    pub coupling: String,
    pub comparisons: Vec<ComparisonReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub command: String,
    pub potential: String,
    pub order: usize,
    pub lambda_grid: Vec<f64>,
    pub entries: Vec<VerifyEntry>,
    pub all_coefficients_match: bool,
    pub all_slopes_ok: bool,
}

impl VerifyReport {
    pub fn new(potential: &str, order: usize, lambda_grid: &[f64], entries: Vec<VerifyEntry>) -> Self {
        let all = |f: &dyn Fn(&ComparisonReport) -> bool| entries.iter().flat_map(|e| &e.comparisons).all(f);
        Self {
            schema: SCHEMA.into(),
            command: "verify".into(),
            potential: potential.into(),
            order,
            lambda_grid: lambda_grid.to_vec(),
            all_coefficients_match: all(&|c| c.coefficients_match()),
            all_slopes_ok: all(&|c| c.slope_ok),
            entries,
        }
    }
}
