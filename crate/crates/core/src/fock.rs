//! Fixed-total-number Fock sectors of `m` bosonic modes and the q-boson
//! operators acting on them.
//!
//! Modes are indexed from 0 in this API. A q-boson creation operator acts as
//! `b_i^+ |.., n_i, ..> = sqrt([n_i + 1]_q) |.., n_i + 1, ..>`, so
//! `b^+ b = [N]_q` and `b b^+ = [N + 1]_q`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::operator::{Operator, Space};
use crate::qnum::{q_factorial, q_number, validate_parameter, DeformationParameter};
use crate::{Error, Result};

/// Default cap on sector dimension.
pub const DEFAULT_DIMENSION_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct FockBasis {
    n_modes: usize,
    total: u32,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn new(n_modes: usize, total: u32) -> Result<Self> {
        Self::with_cap(n_modes, total, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(n_modes: usize, total: u32, cap: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Domain("a Fock sector needs at least one mode".into()));
        }
        let dimension = sector_dimension(n_modes, total);
        if dimension > cap as u128 {
            return Err(Error::DimensionOverflow { dimension, cap });
        }
        let mut states = Vec::with_capacity(dimension as usize);
        let mut current = vec![0; n_modes];
        fill(&mut states, &mut current, 0, total);
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self { n_modes, total, states, index })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn index_of(&self, occupations: &[u32]) -> Option<usize> {
        self.index.get(occupations).copied()
    }

    pub fn space(&self) -> Space {
        Space::Sector { modes: self.n_modes, total: self.total, dim: self.dim() }
    }

    /// Diagonal operator with entries `f(occupations)`.
    pub fn diagonal(&self, f: impl Fn(&[u32]) -> Complex64) -> Operator {
        Operator::diagonal(self.space(), self.states.iter().map(|s| f(s)).collect())
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::ModeOutOfRange { mode, n_modes: self.n_modes });
        }
        Ok(())
    }
}

/// `C(total + m - 1, m - 1)`.
pub fn sector_dimension(n_modes: usize, total: u32) -> u128 {
    let k = (n_modes - 1) as u128;
    let n = total as u128 + k;
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc = C(n, i + 1) after the update
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, mode: usize, remaining: u32) {
    if mode + 1 == current.len() {
        current[mode] = remaining;
        out.push(current.clone());
        return;
    }
    for n in (0..=remaining).rev() {
        current[mode] = n;
        fill(out, current, mode + 1, remaining - n);
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn number_op(basis: &FockBasis, mode: usize) -> Result<Operator> {
    basis.check_mode(mode)?;
    Ok(basis.diagonal(|s| c(s[mode] as f64)))
}

/// q-boson creation operator `b_mode^+` from sector `N` into sector `N + 1`.
pub fn creation_op(from: &FockBasis, to: &FockBasis, mode: usize, q: &DeformationParameter) -> Result<Operator> {
    if from.n_modes != to.n_modes || to.total != from.total + 1 {
        return Err(Error::SpaceMismatch { left: from.space(), right: to.space() });
    }
    from.check_mode(mode)?;
    validate_parameter(q, to.total).into_result()?;
    let triplets = from.states.iter().enumerate().map(|(col, s)| {
        let mut t = s.clone();
        t[mode] += 1;
        let row = to.index_of(&t).expect("raised state lies in the target sector");
        (row, col, c(q_number(t[mode] as f64, q).sqrt()))
    });
    Ok(Operator::from_triplets(from.space(), to.space(), triplets.collect::<Vec<_>>()))
}

/// q-boson annihilation operator `b_mode` from sector `N + 1` into sector `N`:
/// the adjoint of [`creation_op`].
pub fn annihilation_op(from: &FockBasis, to: &FockBasis, mode: usize, q: &DeformationParameter) -> Result<Operator> {
    Ok(creation_op(to, from, mode, q)?.adjoint())
}

/// Number-conserving bilinear `b_i^+ b_j` on a fixed sector; for `i == j`
/// this is the diagonal `[N_i]_q`.
pub fn bilinear(basis: &FockBasis, i: usize, j: usize, q: &DeformationParameter) -> Result<Operator> {
    basis.check_mode(i)?;
    basis.check_mode(j)?;
    validate_parameter(q, basis.total).into_result()?;
    if i == j {
        return Ok(basis.diagonal(|s| c(q_number(s[i] as f64, q))));
    }
    let triplets: Vec<_> = basis
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| s[j] > 0)
        .map(|(col, s)| {
            let mut t = s.clone();
            t[j] -= 1;
            t[i] += 1;
            let amp = (q_number(s[j] as f64, q) * q_number(t[i] as f64, q)).sqrt();
            (basis.index_of(&t).expect("same sector"), col, c(amp))
        })
        .collect();
    Ok(Operator::from_triplets(basis.space(), basis.space(), triplets))
}

/// Diagonal `q^{f(n)}`; half-integer exponents are fine since the operator
/// is diagonal.
pub fn q_power(basis: &FockBasis, q: &DeformationParameter, f: impl Fn(&[u32]) -> f64) -> Operator {
    basis.diagonal(|s| q.pow(f(s)))
}

/// Diagonal `sqrt(q^{N_mode} + q^{-N_mode})`. For a phase this is
/// `sqrt(2 cos(n tau))`, which must stay positive on the sector.
pub fn sqrt_q_sum(basis: &FockBasis, mode: usize, q: &DeformationParameter) -> Result<Operator> {
    basis.check_mode(mode)?;
    let mut bad = Vec::new();
    let entries = basis
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let v = q.pow(s[mode] as f64) + q.pow(-(s[mode] as f64));
            if v.re <= 0.0 {
                bad.push(i);
            }
            c(v.re.max(0.0).sqrt())
        })
        .collect();
    if !bad.is_empty() {
        return Err(Error::RadicandSign(bad));
    }
    Ok(Operator::diagonal(basis.space(), entries))
}

/// The state `prod_i (b_i^+)^{n_i} / sqrt([n_i]_q!) |0>`, computed by
/// actually applying the ladder operators sector by sector.
pub fn normalized_state(basis: &FockBasis, occupations: &[u32], q: &DeformationParameter) -> Result<Vec<Complex64>> {
    if occupations.len() != basis.n_modes || occupations.iter().sum::<u32>() != basis.total {
        return Err(Error::Domain(format!(
            "occupations {occupations:?} do not lie in the sector with {} modes and N = {}",
            basis.n_modes, basis.total
        )));
    }
    let mut sector = FockBasis::new(basis.n_modes, 0)?;
    let mut v = vec![c(1.0)];
    for (mode, &n) in occupations.iter().enumerate() {
        for _ in 0..n {
            let next = FockBasis::new(basis.n_modes, sector.total + 1)?;
            v = creation_op(&sector, &next, mode, q)?.apply(&v);
            sector = next;
        }
        let norm = q_factorial(n, q).sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
    }
    Ok(v)
}

/// Fock-space operator induced by a one-body change of mode frame: the
/// column for `|n>` is `prod_j (sum_i u_ij a_i^+)^{n_j} / sqrt(n_j!) |0>`,
/// with classical (undeformed) bosons.
pub fn induced_unitary(basis: &FockBasis, u: &DMatrix<f64>) -> Result<Operator> {
    let m = basis.n_modes;
    if u.nrows() != m || u.ncols() != m {
        return Err(Error::Domain(format!("one-body matrix must be {m}x{m}")));
    }
    let mut triplets = Vec::new();
    for (col, s) in basis.states.iter().enumerate() {
        // polynomial in creation operators: monomial exponents -> coefficient
        let mut poly: HashMap<Vec<u32>, f64> = HashMap::from([(vec![0; m], 1.0)]);
        let mut norm = 1.0;
        for (j, &n) in s.iter().enumerate() {
            norm *= factorial(n);
            for _ in 0..n {
                let mut next: HashMap<Vec<u32>, f64> = HashMap::new();
                for (mono, coef) in &poly {
                    for i in 0..m {
                        let uij = u[(i, j)];
                        if uij == 0.0 {
                            continue;
                        }
                        let mut t = mono.clone();
                        t[i] += 1;
                        *next.entry(t).or_default() += coef * uij;
                    }
                }
                poly = next;
            }
        }
        for (mono, coef) in poly {
            // (a^+)^k |0> = sqrt(k!) |k>
            let amp = coef * mono.iter().map(|&k| factorial(k)).product::<f64>().sqrt() / norm.sqrt();
            if amp != 0.0 {
                triplets.push((basis.index_of(&mono).expect("same sector"), col, c(amp)));
            }
        }
    }
    Ok(Operator::from_triplets(basis.space(), basis.space(), triplets))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}
