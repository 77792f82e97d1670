//! Deformed rotor spectra, Hamiltonians built from chain invariants, level
//! extraction and rotor fits.
//!
//! The rotor spectrum is `E_j = K [j]_q [j+1]_q`. For a phase
//! `q = exp(i tau)` this is `K sin(tau j) sin(tau (j+1)) / sin^2(tau)`.

use std::f64::consts::PI;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{casimir_slq2, commutator};
use crate::chains::{build_chain, ChainKind, ChainRealization, CHAIN_MODES};
use crate::fock::FockBasis;
use crate::maps::OneBody;
use crate::operator::Operator;
use crate::qnum::{q_number, validate_parameter, DeformationParameter};
use crate::{Error, Result};

fn check_spin(j: f64) -> Result<()> {
    if !(j.is_finite() && j >= 0.0 && (2.0 * j).fract() == 0.0) {
        return Err(Error::Domain(format!("j must be a nonnegative integer or half-integer, got {j}")));
    }
    Ok(())
}

/// `E_j = K [j]_q [j+1]_q` for each `j`.
pub fn rotator_spectrum(k: f64, q: &DeformationParameter, js: &[f64]) -> Result<Vec<(f64, f64)>> {
    for &j in js {
        check_spin(j)?;
    }
    let j_max = js.iter().copied().fold(0.0, f64::max);
    validate_parameter(q, (j_max + 1.0).ceil() as u32).into_result()?;
    Ok(js.iter().map(|&j| (j, k * q_number(j, q) * q_number(j + 1.0, q))).collect())
}

/// A term of a chain Hamiltonian.
#[derive(Clone, Debug)]
pub enum Invariant {
    /// sl_q(2) Casimir of the chain's so_q(3) generators.
    So3Casimir,
    /// Undeformed quadratic Casimir of the named subalgebra.
    ClassicalCasimir(String),
    /// Any operator on the chain's sector, typically a polynomial in chain
    /// generators.
    Custom { label: String, op: Operator },
}

impl FromStr for Invariant {
    type Err = Error;

    /// `so3` or `casimir:<subalgebra>`, e.g. `casimir:so_q(5)`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "so3" | "so_q(3)" => Ok(Self::So3Casimir),
            _ => match s.strip_prefix("casimir:") {
                Some(name) if !name.is_empty() => Ok(Self::ClassicalCasimir(name.to_string())),
                _ => Err(Error::UnknownInvariant(s.to_string())),
            },
        }
    }
}

/// One-body matrices spanning the undeformed version of `name`.
fn classical_span(kind: ChainKind, name: &str) -> Result<Vec<DMatrix<f64>>> {
    let one = FockBasis::new(CHAIN_MODES, 1)?;
    let chain = build_chain(kind, &one, &DeformationParameter::classical())?;
    let alg = chain.subalgebra(name).ok_or_else(|| Error::UnknownInvariant(format!("casimir:{name}")))?;
    // on the one-boson sector state i is mode i, so matrix elements are one-body coefficients
    let real = |op: &Operator| op.to_dense().map(|z| z.re);
    let mut gens = Vec::new();
    for t in &alg.triples {
        gens.push(real(&t.e_plus));
        gens.push(real(&t.e_minus));
        gens.push(real(&t.h));
    }
    for (_, x) in &alg.extra_cartans {
        gens.push(real(x));
    }
    lie_closure(gens)
}

/// Orthonormal (Frobenius) basis of the Lie algebra generated by `gens`.
fn lie_closure(gens: Vec<DMatrix<f64>>) -> Result<Vec<DMatrix<f64>>> {
    const TOL: f64 = 1e-10;
    let mut basis: Vec<DMatrix<f64>> = Vec::new();
    let add = |basis: &mut Vec<DMatrix<f64>>, mut x: DMatrix<f64>| -> bool {
        for b in basis.iter() {
            let p = b.dot(&x);
            x -= b * p;
        }
        let n = x.norm();
        if n > TOL {
            basis.push(x / n);
            true
        } else {
            false
        }
    };
    for g in gens {
        add(&mut basis, g);
    }
    let mut start = 0;
    while start < basis.len() {
        let end = basis.len();
        for a in 0..end {
            for b in start.max(a + 1)..end {
                let c = &basis[a] * &basis[b] - &basis[b] * &basis[a];
                add(&mut basis, c);
            }
        }
        start = end;
    }
    Ok(basis)
}

/// `sum_ab (B^-1)_ab X_a X_b` on the sector, with `B_ab = tr(X_a X_b)`.
fn casimir_from_span(span: &[DMatrix<f64>], basis: &FockBasis) -> Result<Operator> {
    let n = span.len();
    let form = DMatrix::from_fn(n, n, |a, b| (&span[a] * &span[b]).trace());
    let inv = form.try_inverse().ok_or_else(|| Error::Degenerate("trace form is singular on this subalgebra".into()))?;
    let mut acc = Operator::zero(basis.space(), basis.space());
    for a in 0..n {
        let mut dual = DMatrix::zeros(span[a].nrows(), span[a].ncols());
        for b in 0..n {
            dual += &span[b] * inv[(a, b)];
        }
        let xa = OneBody::from_matrix(span[a].clone())?.lift(basis)?;
        let ya = OneBody::from_matrix(dual)?.lift(basis)?;
        acc = acc.try_add(&xa.try_mul(&ya)?)?;
    }
    Ok(acc.pruned(1e-13))
}

/// Undeformed quadratic Casimir of subalgebra `name` of the chain.
pub fn classical_casimir(chain: &ChainRealization, name: &str) -> Result<Operator> {
    let span = classical_span(chain.kind, name)?;
    casimir_from_span(&span, &chain.basis)
}

/// `sum_k c_k I_k`. Every term must act on the chain's sector and commute
/// with `L0`.
pub fn build_hamiltonian(chain: &ChainRealization, terms: &[(Invariant, f64)]) -> Result<Operator> {
    let space = chain.basis.space();
    let mut h = Operator::zero(space.clone(), space.clone());
    for (inv, coef) in terms {
        let (label, op) = match inv {
            Invariant::So3Casimir => ("so3".to_string(), casimir_slq2(&chain.so3.as_triple("L")?, &chain.q)?),
            Invariant::ClassicalCasimir(name) => (format!("casimir:{name}"), classical_casimir(chain, name)?),
            Invariant::Custom { label, op } => (label.clone(), op.clone()),
        };
        if op.domain() != &space || op.codomain() != &space {
            return Err(Error::NonConserving(format!("{label} does not act on {space}")));
        }
        let dev = commutator(&op, &chain.so3.l_zero)?.norm_inf();
        if dev > 1e-10 * op.norm_inf().max(1.0) {
            return Err(Error::NonConserving(format!("{label} does not commute with L0 (residual {dev:e})")));
        }
        h = h.try_add(&op.scale_real(*coef))?;
    }
    Ok(h)
}

/// `H(q)` for real `q`, `(H(q) + H(1/q)) / 2` for a phase.
pub fn symmetrize<F>(builder: F, q: &DeformationParameter) -> Result<Operator>
where
    F: Fn(&DeformationParameter) -> Result<Operator>,
{
    if q.is_real() {
        return builder(q);
    }
    let a = builder(q)?;
    let b = builder(&q.inverse())?;
    Ok(a.try_add(&b)?.scale_real(0.5))
}

/// An eigenvalue and its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Eigenlevel {
    pub energy: f64,
    pub multiplicity: usize,
}

/// Hermiticity tolerance of [`eigenlevels`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Ascending eigenvalues of a self-adjoint operator, merged when closer
/// than `1e-8` times the spectral scale.
pub fn eigenlevels(h: &Operator) -> Result<Vec<Eigenlevel>> {
    if !h.is_square() {
        return Err(Error::Domain("eigenlevels needs a square operator".into()));
    }
    let dev = h.try_sub(&h.adjoint())?.max_abs();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let dense = h.to_dense();
    let sym = (&dense + dense.adjoint()) * Complex64::new(0.5, 0.0);
    let mut vals: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut levels: Vec<(f64, usize)> = Vec::new();
    for v in vals {
        match levels.last_mut() {
            Some((sum, n)) if (v - *sum / *n as f64).abs() <= 1e-8 * scale => {
                *sum += v;
                *n += 1;
            }
            _ => levels.push((v, 1)),
        }
    }
    Ok(levels.into_iter().map(|(s, n)| Eigenlevel { energy: s / n as f64, multiplicity: n }).collect())
}

/// One measured level; `weight` defaults to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub j: f64,
    pub energy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "LevelSchemeRepr")]
pub struct LevelScheme {
    pub levels: Vec<LevelRecord>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LevelSchemeRepr {
    List(Vec<LevelRecord>),
    Object { levels: Vec<LevelRecord> },
}

impl From<LevelSchemeRepr> for LevelScheme {
    fn from(r: LevelSchemeRepr) -> Self {
        match r {
            LevelSchemeRepr::List(levels) | LevelSchemeRepr::Object { levels } => Self { levels },
        }
    }
}

impl LevelScheme {
    pub fn new(levels: Vec<LevelRecord>) -> Self {
        Self { levels }
    }

    /// Levels with unit weights.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self::new(pairs.iter().map(|&(j, energy)| LevelRecord { j, energy, weight: None }).collect())
    }

    /// Distinct valid spins, finite energies and positive weights.
    pub fn validate(&self) -> Result<()> {
        let mut seen: Vec<f64> = Vec::new();
        for l in &self.levels {
            check_spin(l.j)?;
            if seen.contains(&l.j) {
                return Err(Error::Domain(format!("duplicate level j = {}", l.j)));
            }
            seen.push(l.j);
            if !l.energy.is_finite() {
                return Err(Error::Domain(format!("energy of j = {} is not finite", l.j)));
            }
            if let Some(w) = l.weight {
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::Domain(format!("weight of j = {} must be positive", l.j)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResidual {
    pub j: f64,
    pub energy: f64,
    pub fitted: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    #[serde(rename = "K")]
    pub k: f64,
    pub tau: f64,
    /// `sqrt(sum w r^2 / sum w)`.
    pub rms: f64,
    pub residuals: Vec<FitResidual>,
}

/// Grid step of the coarse `tau` scan.
pub const FIT_GRID_STEP: f64 = PI / 2000.0;

struct FitData {
    j: Vec<f64>,
    e: Vec<f64>,
    w: Vec<f64>,
}

impl FitData {
    fn f(&self, tau: f64) -> Vec<f64> {
        let q = DeformationParameter::Phase(tau);
        self.j.iter().map(|&j| q_number(j, &q) * q_number(j + 1.0, &q)).collect()
    }

    /// Profiled `K*(tau)` and `sum w (E - K* f)^2`.
    fn profile(&self, tau: f64) -> (f64, f64) {
        let f = self.f(tau);
        let num: f64 = (0..f.len()).map(|i| self.w[i] * self.e[i] * f[i]).sum();
        let den: f64 = (0..f.len()).map(|i| self.w[i] * f[i] * f[i]).sum();
        let k = num / den;
        let s = (0..f.len()).map(|i| self.w[i] * (self.e[i] - k * f[i]).powi(2)).sum();
        (k, s)
    }
}

/// Least-squares fit of `E_j = K [j]_q [j+1]_q`, `q = exp(i tau)`, with `K`
/// profiled out and `tau` searched on `[0, pi/(j_max+1))`: a grid scan
/// followed by golden-section refinement around the best grid point.
pub fn fit_rotator(levels: &LevelScheme) -> Result<FitResult> {
    levels.validate()?;
    let positive = levels.levels.iter().filter(|l| l.j > 0.0).count();
    if positive < 2 {
        return Err(Error::Underdetermined(format!("need at least 2 levels with j > 0, got {positive}")));
    }
    if levels.levels.iter().all(|l| l.energy == 0.0) {
        return Err(Error::Degenerate("all energies are zero".into()));
    }
    let data = FitData {
        j: levels.levels.iter().map(|l| l.j).collect(),
        e: levels.levels.iter().map(|l| l.energy).collect(),
        w: levels.levels.iter().map(|l| l.weight.unwrap_or(1.0)).collect(),
    };
    let j_max = data.j.iter().copied().fold(0.0, f64::max);
    let tau_max = PI / (j_max + 1.0);
    let grid: Vec<f64> = (0..).map(|k| k as f64 * FIT_GRID_STEP).take_while(|&t| t < tau_max).collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, data.profile(t).1))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid contains tau = 0");
    let lo = grid[best.saturating_sub(1)];
    let hi = grid.get(best + 1).copied().unwrap_or(grid[best]);
    let tau = golden_section(|t| data.profile(t).1, lo, hi);
    let (k, s) = data.profile(tau);
    let f = data.f(tau);
    let wsum: f64 = data.w.iter().sum();
    let residuals = (0..f.len())
        .map(|i| FitResidual { j: data.j[i], energy: data.e[i], fitted: k * f[i], residual: data.e[i] - k * f[i] })
        .collect();
    Ok(FitResult { k, tau, rms: (s / wsum).sqrt(), residuals })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 1e-14 {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    // the interval ends can beat the interior when the minimum sits on a bound
    [a, b, 0.5 * (a + b)].into_iter().min_by(|x, y| f(*x).total_cmp(&f(*y))).expect("three candidates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{build_gamma, build_rotational, build_vibrational};

    fn real(q: f64) -> DeformationParameter {
        DeformationParameter::real(q).unwrap()
    }

    fn sine_form(k: f64, tau: f64, j: f64) -> f64 {
        k * (tau * j).sin() * (tau * (j + 1.0)).sin() / tau.sin().powi(2)
    }

    #[test]
    fn rotator_examples() {
        let p = DeformationParameter::phase(0.1).unwrap();
        let e = rotator_spectrum(1.0, &p, &[0.0, 2.0]).unwrap();
        assert_eq!(e[0].1, 0.0);
        assert!((e[1].1 - 0.2f64.sin() * 0.3f64.sin() / 0.1f64.sin().powi(2)).abs() < 1e-12);
        let c = rotator_spectrum(1.0, &DeformationParameter::classical(), &[2.0]).unwrap();
        assert_eq!(c[0].1, 6.0);
        assert!(rotator_spectrum(1.0, &p, &[1.3]).is_err());
        // [n] changes sign past pi / tau
        assert!(rotator_spectrum(1.0, &DeformationParameter::phase(0.5).unwrap(), &[7.0]).is_err());
    }

    #[test]
    fn rotator_matches_sine_form() {
        for tau in [0.05, 0.1, 0.3] {
            let p = DeformationParameter::phase(tau).unwrap();
            let js: Vec<f64> = (0..=9).map(|j| j as f64).collect();
            for (j, e) in rotator_spectrum(2.5, &p, &js).unwrap() {
                assert!((e - sine_form(2.5, tau, j)).abs() < 1e-12 * e.abs().max(1.0));
            }
        }
    }

    #[test]
    fn invariant_ids() {
        assert!(matches!("so3".parse::<Invariant>().unwrap(), Invariant::So3Casimir));
        assert!(matches!("casimir:so_q(5)".parse::<Invariant>().unwrap(), Invariant::ClassicalCasimir(n) if n == "so_q(5)"));
        assert!(matches!("u(5)".parse::<Invariant>(), Err(Error::UnknownInvariant(_))));
    }

    #[test]
    fn so3_casimir_on_one_boson() {
        // d boson: one l = 2 multiplet; s boson: l = 0
        let q = real(1.3);
        let ch = build_vibrational(&FockBasis::new(6, 1).unwrap(), &q).unwrap();
        let h = build_hamiltonian(&ch, &[(Invariant::So3Casimir, 1.0)]).unwrap();
        let lv = eigenlevels(&h).unwrap();
        let want = q_number(2.0, &q) * q_number(3.0, &q);
        assert_eq!(lv.len(), 2);
        assert!(lv[0].energy.abs() < 1e-12 && lv[0].multiplicity == 1);
        assert!((lv[1].energy - want).abs() < 1e-10 && lv[1].multiplicity == 5);
    }

    #[test]
    fn empty_hamiltonian_is_zero() {
        let ch = build_vibrational(&FockBasis::new(6, 2).unwrap(), &real(1.3)).unwrap();
        let h = build_hamiltonian(&ch, &[]).unwrap();
        assert_eq!(h.nnz(), 0);
        assert_eq!(eigenlevels(&h).unwrap(), vec![Eigenlevel { energy: 0.0, multiplicity: 21 }]);
    }

    #[test]
    fn classical_casimirs_are_invariant() {
        let q = real(1.3);
        let b = FockBasis::new(6, 2).unwrap();
        let vib = build_vibrational(&b, &q).unwrap();
        for name in ["gl_q(5)", "so_q(5)"] {
            let c = classical_casimir(&vib, name).unwrap();
            assert!((&c - &c.adjoint()).max_abs() < 1e-12);
            assert!(build_hamiltonian(&vib, &[(Invariant::ClassicalCasimir(name.into()), 1.0)]).is_ok());
        }
        // so(3) Casimir from the classical span is l(l+1) times a constant
        let rot = build_rotational(&FockBasis::new(6, 1).unwrap(), &DeformationParameter::classical()).unwrap();
        let lv = eigenlevels(&classical_casimir(&rot, "sl_q(3)").unwrap()).unwrap();
        assert_eq!(lv.len(), 1);
        let gam = build_gamma(&b, &q).unwrap();
        let c6 = classical_casimir(&gam, "so_q(6)").unwrap();
        let c5 = classical_casimir(&gam, "so_q(5)").unwrap();
        assert!(commutator(&c6, &c5).unwrap().norm_inf() < 1e-10);
    }

    #[test]
    fn linear_in_coefficients() {
        let q = real(0.7);
        let ch = build_vibrational(&FockBasis::new(6, 2).unwrap(), &q).unwrap();
        let terms = |a: f64, b: f64| vec![(Invariant::So3Casimir, a), (Invariant::ClassicalCasimir("so_q(5)".into()), b)];
        let h1 = build_hamiltonian(&ch, &terms(1.0, 0.0)).unwrap();
        let h2 = build_hamiltonian(&ch, &terms(0.0, 1.0)).unwrap();
        let h = build_hamiltonian(&ch, &terms(2.0, -3.0)).unwrap();
        assert!((&h - &(&(&h1 * 2.0) - &(&h2 * 3.0))).norm_inf() < 1e-12);
    }

    #[test]
    fn non_conserving_terms_are_rejected() {
        let ch = build_vibrational(&FockBasis::new(6, 2).unwrap(), &real(1.3)).unwrap();
        let e = ch.subalgebra("so_q(5)").unwrap().triples[0].e_plus.clone();
        let bad = Invariant::Custom { label: "E1+".into(), op: e };
        assert!(matches!(build_hamiltonian(&ch, &[(bad, 1.0)]), Err(Error::NonConserving(_))));
        assert!(matches!(
            build_hamiltonian(&ch, &[(Invariant::ClassicalCasimir("u(7)".into()), 1.0)]),
            Err(Error::UnknownInvariant(_))
        ));
    }

    #[test]
    fn symmetrize_phase() {
        let b = FockBasis::new(6, 2).unwrap();
        let builder = |q: &DeformationParameter| {
            let ch = build_vibrational(&b, q)?;
            let t = &ch.subalgebra("so_q(5)").unwrap().triples[1];
            let op = t.e_minus.try_mul(&t.e_plus)?;
            let op = op.try_add(&ch.so3.l_minus.try_mul(&ch.so3.l_plus)?)?;
            Ok(op)
        };
        let p = DeformationParameter::phase(0.2).unwrap();
        let raw = builder(&p).unwrap();
        assert!((&raw - &raw.adjoint()).max_abs() > 1e-6);
        let s = symmetrize(builder, &p).unwrap();
        assert!((&s - &s.adjoint()).max_abs() < 1e-12);
        let m = symmetrize(builder, &p.inverse()).unwrap();
        assert!((&s - &m).max_abs() < 1e-15);
        let r = real(1.3);
        assert_eq!(symmetrize(builder, &r).unwrap(), builder(&r).unwrap());
    }

    #[test]
    fn eigenlevels_rejects_non_hermitian() {
        let b = FockBasis::new(2, 1).unwrap();
        let x = Operator::from_triplets(b.space(), b.space(), vec![(0, 1, Complex64::new(1.0, 0.0))]);
        assert!(matches!(eigenlevels(&x), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn classical_spectrum_pattern() {
        let ch = build_vibrational(&FockBasis::new(6, 2).unwrap(), &DeformationParameter::classical()).unwrap();
        let h = build_hamiltonian(&ch, &[(Invariant::So3Casimir, 1.0)]).unwrap();
        for l in eigenlevels(&h).unwrap() {
            let j = (-1.0 + (1.0 + 4.0 * l.energy).sqrt()) / 2.0;
            assert!((j - j.round()).abs() < 1e-9);
            assert_eq!(l.multiplicity % (2 * j.round() as usize + 1), 0);
        }
    }

    #[test]
    fn fit_classical_data() {
        let k = 12.5;
        let data = LevelScheme::from_pairs(&[(2.0, 6.0 * k), (4.0, 20.0 * k), (6.0, 42.0 * k)]);
        let fit = fit_rotator(&data).unwrap();
        assert!(fit.tau < 1e-6, "{}", fit.tau);
        assert!((fit.k - k).abs() < 1e-9);
    }

    #[test]
    fn fit_round_trip() {
        let (k, tau) = (30.0, 0.05);
        let pairs: Vec<(f64, f64)> = (1..=8).map(|i| (2.0 * i as f64, sine_form(k, tau, 2.0 * i as f64))).collect();
        let fit = fit_rotator(&LevelScheme::from_pairs(&pairs)).unwrap();
        assert!((fit.tau - tau).abs() < 1e-6);
        assert!((fit.k - k).abs() / k < 1e-6);
        let recomputed = (fit.residuals.iter().map(|r| r.residual.powi(2)).sum::<f64>() / 8.0).sqrt();
        assert!((fit.rms - recomputed).abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(fit_rotator(&LevelScheme::from_pairs(&[(2.0, 6.0)])), Err(Error::Underdetermined(_))));
        assert!(matches!(fit_rotator(&LevelScheme::from_pairs(&[(2.0, 0.0), (4.0, 0.0)])), Err(Error::Degenerate(_))));
        assert!(fit_rotator(&LevelScheme::from_pairs(&[(2.0, 6.0), (2.0, 7.0)])).is_err());
    }

    #[test]
    fn level_scheme_json_forms() {
        let a: LevelScheme = serde_json_like(r#"[{"j": 2, "energy": 6.0}, {"j": 4, "energy": 20.0, "weight": 2}]"#);
        let b: LevelScheme = serde_json_like(r#"{"levels": [{"j": 2, "energy": 6.0}, {"j": 4, "energy": 20.0, "weight": 2}]}"#);
        assert_eq!(a, b);
        assert_eq!(a.levels[1].weight, Some(2.0));
    }

    fn serde_json_like(s: &str) -> LevelScheme {
        serde_json::from_str(s).unwrap()
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn ratios_are_k_independent(k1 in 0.1f64..100.0, k2 in 0.1f64..100.0, tau in 0.0f64..0.2) {
                let q = if tau == 0.0 { DeformationParameter::classical() } else { DeformationParameter::phase(tau).unwrap() };
                let js = [2.0, 4.0, 6.0];
                let a = rotator_spectrum(k1, &q, &js).unwrap();
                let b = rotator_spectrum(k2, &q, &js).unwrap();
                for i in 1..3 {
                    prop_assert!((a[i].1 / a[0].1 - b[i].1 / b[0].1).abs() < 1e-12);
                }
            }

            #[test]
            fn fit_tau_is_scale_invariant(tau in 0.01f64..0.1, scale in 0.5f64..50.0) {
                let pairs: Vec<(f64, f64)> = (1..=4).map(|i| (2.0 * i as f64, sine_form(1.0, tau, 2.0 * i as f64))).collect();
                let scaled: Vec<(f64, f64)> = pairs.iter().map(|&(j, e)| (j, e * scale)).collect();
                let a = fit_rotator(&LevelScheme::from_pairs(&pairs)).unwrap();
                let b = fit_rotator(&LevelScheme::from_pairs(&scaled)).unwrap();
                prop_assert!((a.tau - b.tau).abs() < FIT_GRID_STEP);
                prop_assert!((b.k / a.k - scale).abs() < 1e-6 * scale);
            }
        }
    }
}
