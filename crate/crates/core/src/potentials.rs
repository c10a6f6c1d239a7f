//! Potentials built from monomials, truncated power series and uncoupled modes.
//!
//! Every term carries its own coupling symbol. Terms sharing a coupling are
//! solved together; different couplings only combine linearly, which is why
//! orders above one are restricted to a single term.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::hamiltonian::polynomial_potential;
use crate::lie::generate_algebra;
use crate::number::NumberPolynomial;
use crate::oracle::rs_corrections;
use crate::perturbation::{solve_perturbation, PerturbationResult};
use crate::radical::Radical2Scalar;
use crate::weyl::LambdaSeries;

pub const DEFAULT_COUPLING: &str = "lambda";

fn default_coupling() -> String {
    DEFAULT_COUPLING.to_string()
}

fn one() -> Radical2Scalar {
    Radical2Scalar::integer(1)
}

fn default_order() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub power: u32,
    #[serde(default = "default_coupling")]
    pub coupling: String,
    #[serde(default = "one")]
    pub coefficient: Radical2Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Exp,
    Cosh,
    Custom,
}

/// `coefficient · Σ_{k ≤ cutoff} c_k xᵏ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub cutoff: u32,
    #[serde(default = "default_coupling")]
    pub coupling: String,
    #[serde(default = "one")]
    pub coefficient: Radical2Scalar,
    /// `c_k` for [`SeriesKind::Custom`]; missing entries are zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<Radical2Scalar>,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind, cutoff: u32) -> Self {
        Self { kind, cutoff, coupling: default_coupling(), coefficient: one(), coefficients: Vec::new() }
    }

    /// `c_k` before the overall coefficient.
    pub fn raw_coefficient(&self, k: u32) -> Radical2Scalar {
        let inv_factorial = || Radical2Scalar::rational(BigRational::new(BigInt::from(1), factorial(k)));
        match self.kind {
            SeriesKind::Exp => inv_factorial(),
            SeriesKind::Cosh if k.is_multiple_of(2) => inv_factorial(),
            SeriesKind::Cosh => Radical2Scalar::integer(0),
            SeriesKind::Custom => {
                self.coefficients.get(k as usize).cloned().unwrap_or_else(|| Radical2Scalar::integer(0))
            }
        }
    }

    pub fn terms(&self) -> Vec<TermSpec> {
        (0..=self.cutoff)
            .filter_map(|k| {
                let c = &self.raw_coefficient(k) * &self.coefficient;
                (c != Radical2Scalar::integer(0)).then(|| TermSpec {
                    power: k,
                    coupling: self.coupling.clone(),
                    coefficient: c,
                })
            })
            .collect()
    }

    /// Estimated first-order contribution at `level` of the omitted terms,
    /// summed over the next 40 powers (the terms fall off factorially).
    pub fn tail_bound(&self, level: u64) -> f64 {
        if self.kind == SeriesKind::Custom {
            return 0.0;
        }
        (self.cutoff + 1..=self.cutoff + 40)
            .map(|k| {
                (self.raw_coefficient(k) * self.coefficient.clone()).to_f64()
                    * rs_corrections(k, level).first_order.to_f64()
            })
            .map(f64::abs)
            .sum()
    }
}

/// A term mixing several modes, e.g. `λ x¹y²`. Accepted by the schema so
/// it can be rejected with a clear error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledTerm {
    pub powers: Vec<u32>,
    #[serde(default = "default_coupling")]
    pub coupling: String,
    #[serde(default = "one")]
    pub coefficient: Radical2Scalar,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
    #[serde(default)]
    pub series: Option<SeriesSpec>,
}

impl ModeSpec {
    pub fn monomial(power: u32) -> Self {
        Self { terms: vec![TermSpec { power, coupling: default_coupling(), coefficient: one() }], ..Self::default() }
    }

    /// Explicit terms followed by the expanded series.
    pub fn all_terms(&self) -> Vec<TermSpec> {
        let mut out = self.terms.clone();
        if let Some(series) = &self.series {
            out.extend(series.terms());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub modes: Vec<ModeSpec>,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coupled: Vec<CoupledTerm>,
}

impl PotentialSpec {
    pub fn single(mode: ModeSpec, order: usize) -> Self {
        Self { modes: vec![mode], order, coupled: Vec::new() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { column: e.column(), message: e.to_string() })
    }

    fn check_uncoupled(&self) -> Result<()> {
        match self.coupled.first() {
            Some(term) => {
                let vars: Vec<String> =
                    term.powers.iter().enumerate().map(|(i, p)| format!("{}^{p}", mode_variable(i))).collect();
                Err(Error::UnsupportedCoupling(format!("{} {}", term.coupling, vars.join(" "))))
            }
            None => Ok(()),
        }
    }
}

/// `x, y, z, w, x5, x6, …`
pub fn mode_variable(index: usize) -> String {
    match index {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        _ => format!("x{}", index + 1),
    }
}

#[derive(Clone, Debug)]
pub struct SeriesSummary {
    pub kind: SeriesKind,
    pub cutoff: u32,
    pub tail_bound_ground: f64,
}

/// One mode solved per coupling symbol.
#[derive(Clone, Debug)]
pub struct ModeResult {
    pub index: usize,
    pub name: String,
    pub order: usize,
    pub terms: Vec<TermSpec>,
    pub results: BTreeMap<String, PerturbationResult<Radical2Scalar>>,
    pub series: Option<SeriesSummary>,
}

impl ModeResult {
    /// Level shift for one coupling, zero when the coupling is absent.
    pub fn shift(&self, coupling: &str, level: u64) -> LambdaSeries<Radical2Scalar> {
        self.results
            .get(coupling)
            .map(|r| r.eigenvalue_series.evaluate(level))
            .unwrap_or_else(|| LambdaSeries::zero(self.order))
    }

    pub fn shift_polynomial(&self, coupling: &str) -> Option<&NumberPolynomial<Radical2Scalar>> {
        self.results.get(coupling).map(|r| &r.eigenvalue_series)
    }

    /// The only result when the mode has a single coupling.
    pub fn single(&self) -> Option<&PerturbationResult<Radical2Scalar>> {
        (self.results.len() == 1).then(|| self.results.values().next()).flatten()
    }

    pub fn energy(&self, level: u64, couplings: &BTreeMap<String, f64>) -> Result<f64> {
        let mut e = level as f64 + 0.5;
        for (name, result) in &self.results {
            let value =
                couplings.get(name).ok_or_else(|| Error::Validation(format!("no value for coupling `{name}`")))?;
            e += result.eigenvalue_series.evaluate(level).evaluate_f64(*value);
        }
        Ok(e)
    }
}

/// `constant + Σ_couplings Σ_j c_j·couplingʲ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyForm {
    pub constant: Radical2Scalar,
    pub couplings: BTreeMap<String, LambdaSeries<Radical2Scalar>>,
}

impl EnergyForm {
    pub fn coefficient(&self, coupling: &str, power: usize) -> Radical2Scalar {
        self.couplings.get(coupling).map(|s| s.coeff(power)).unwrap_or_else(|| Radical2Scalar::integer(0))
    }

    pub fn evaluate(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        let mut e = self.constant.to_f64();
        for (name, series) in &self.couplings {
            let v = values.get(name).ok_or_else(|| Error::Validation(format!("no value for coupling `{name}`")))?;
            e += series.evaluate_f64(*v);
        }
        Ok(e)
    }
}

#[derive(Clone, Debug)]
pub struct MultimodeResult {
    pub order: usize,
    pub modes: Vec<ModeResult>,
}

impl MultimodeResult {
    /// Exact energy of `(n₁, …, n_d)` as a form in the coupling symbols.
    pub fn energy_form(&self, levels: &[u64]) -> Result<EnergyForm> {
        if levels.len() != self.modes.len() {
            return Err(Error::Validation(format!("{} quantum numbers for {} modes", levels.len(), self.modes.len())));
        }
        let mut constant = Radical2Scalar::integer(0);
        let mut couplings: BTreeMap<String, LambdaSeries<Radical2Scalar>> = BTreeMap::new();
        for (mode, &n) in self.modes.iter().zip(levels) {
            constant = &constant + &(&Radical2Scalar::integer(n as i64) + &Radical2Scalar::ratio(1, 2));
            for name in mode.results.keys() {
                let shift = mode.shift(name, n);
                let merged = match couplings.remove(name) {
                    Some(existing) => &existing + &shift,
                    None => shift,
                };
                couplings.insert(name.clone(), merged);
            }
        }
        Ok(EnergyForm { constant, couplings })
    }

    pub fn energy(&self, levels: &[u64], couplings: &BTreeMap<String, f64>) -> Result<f64> {
        self.energy_form(levels)?.evaluate(couplings)
    }
}

fn solve_mode(index: usize, mode: &ModeSpec, order: usize) -> Result<ModeResult> {
    if order == 0 {
        return Err(Error::Validation("order must be at least 1".into()));
    }
    let terms = mode.all_terms();
    if terms.is_empty() {
        return Err(Error::Validation(format!("mode {} has no terms", mode_variable(index))));
    }
    if order >= 2 && (terms.len() > 1 || mode.series.is_some()) {
        return Err(Error::Unsupported(format!(
            "order {order} with {} terms: mixed terms produce cross products between couplings; use order 1 or a single term",
            terms.len()
        )));
    }
    let mut groups: BTreeMap<String, Vec<(u32, Radical2Scalar)>> = BTreeMap::new();
    for t in &terms {
        if t.coupling.trim().is_empty() {
            return Err(Error::Validation("empty coupling name".into()));
        }
        groups.entry(t.coupling.clone()).or_default().push((t.power, t.coefficient.clone()));
    }
    let mut results = BTreeMap::new();
    for (name, group) in groups {
        let perturbation = polynomial_potential(&group, order);
        let result = match group.as_slice() {
            [(power, _)] if *power >= 1 => {
                let algebra = generate_algebra::<Radical2Scalar>(*power, order)?;
                let mut r = solve_perturbation(&perturbation, order, Some(&algebra))?;
                r.n = Some(*power);
                r
            }
            _ => solve_perturbation(&perturbation, order, None)?,
        };
        results.insert(name, result);
    }
    let series = mode.series.as_ref().map(|s| SeriesSummary {
        kind: s.kind,
        cutoff: s.cutoff,
        tail_bound_ground: s.tail_bound(0),
    });
    Ok(ModeResult {
        index,
        name: mode.name.clone().unwrap_or_else(|| mode_variable(index)),
        order,
        terms,
        results,
        series,
    })
}

/// Solves a single-mode potential through λᵏ.
pub fn solve_polynomial(spec: &PotentialSpec, order: usize) -> Result<ModeResult> {
    spec.check_uncoupled()?;
    match spec.modes.as_slice() {
        [mode] => solve_mode(0, mode, order),
        modes => Err(Error::Validation(format!("expected one mode, found {}", modes.len()))),
    }
}

/// Solves every mode independently; energies add.
pub fn solve_multimode(spec: &PotentialSpec) -> Result<MultimodeResult> {
    spec.check_uncoupled()?;
    if spec.modes.is_empty() {
        return Err(Error::Validation("potential has no modes".into()));
    }
    let modes = spec.modes.iter().enumerate().map(|(i, m)| solve_mode(i, m, spec.order)).collect::<Result<Vec<_>>>()?;
    Ok(MultimodeResult { order: spec.order, modes })
}
