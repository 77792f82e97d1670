//! Deforming maps between classical boson generators and their q-deformed
//! counterparts.
//!
//! * [`song_factor`] / [`classical_bilinear`]: dressing q-boson bilinears
//!   back to undeformed ones, `b~_i^+ b~_j = sqrt(N_i/[N_i]) b_i^+ b_j sqrt(N_j/[N_j])`.
//! * [`cz_deform`]: sl(2) -> sl_q(2), done spectrally per (j, m) block.
//! * [`sp4_deform`]: so(5) -> so_q(5) for one-body (vector-type) generator
//!   pairs.
//! * [`sp4_cartan_dressing`]: the closed-form Cartan dressing
//!   `e1 = E1 sqrt([H1+H2+1][H2] / ((H1+H2+1) H2))`,
//!   `e2 = 2/(q+1/q) E2 sqrt([H2+1][-H2-2] / ((H2+1)(-H2-2)))`. It does not
//!   satisfy the so_q(5) relations on the boson sectors used in this crate
//!   and is kept for comparison only.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::algebra::{check_sl2, ChevalleyTriple};
use crate::fock::{bilinear, induced_unitary, q_power, sqrt_q_sum, FockBasis};
use crate::operator::Operator;
use crate::qnum::{q_number, validate_parameter, DeformationParameter};
use crate::{Error, Result};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A one-body operator `sum_ij M_ij b~_i^+ b~_j` over undeformed bosons.
#[derive(Clone, Debug, PartialEq)]
pub struct OneBody(DMatrix<f64>);

impl OneBody {
    pub fn zeros(n_modes: usize) -> Self {
        Self(DMatrix::zeros(n_modes, n_modes))
    }

    /// From `(i, j, coefficient)` terms of `b~_i^+ b~_j`.
    pub fn from_terms(n_modes: usize, terms: &[(usize, usize, f64)]) -> Self {
        let mut m = DMatrix::zeros(n_modes, n_modes);
        for &(i, j, x) in terms {
            m[(i, j)] += x;
        }
        Self(m)
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Domain(format!("one-body matrix must be square, got {}x{}", m.nrows(), m.ncols())));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// The operator on a Fock sector.
    pub fn lift(&self, basis: &FockBasis) -> Result<Operator> {
        let one = DeformationParameter::classical();
        let mut acc = Operator::zero(basis.space(), basis.space());
        for ((i, j), &x) in self.0.iter().enumerate().map(|(k, x)| ((k % self.0.nrows(), k / self.0.nrows()), x)) {
            if x != 0.0 {
                acc = acc.try_add(&bilinear(basis, i, j, &one)?.scale_real(x))?;
            }
        }
        Ok(acc)
    }
}

/// Diagonal `sqrt(n / [n]_q)` on occupation `n` of `mode`, `1` at `n = 0`.
pub fn song_factor(basis: &FockBasis, mode: usize, q: &DeformationParameter) -> Result<Operator> {
    if mode >= basis.n_modes() {
        return Err(Error::ModeOutOfRange { mode, n_modes: basis.n_modes() });
    }
    validate_parameter(q, basis.total()).into_result()?;
    Ok(basis.diagonal(|s| {
        let n = s[mode] as f64;
        if s[mode] == 0 {
            c(1.0)
        } else {
            c((n / q_number(n, q)).sqrt())
        }
    }))
}

/// `song(left) * x * song(right)`.
pub fn song_dress(basis: &FockBasis, x: &Operator, left: usize, right: usize, q: &DeformationParameter) -> Result<Operator> {
    song_factor(basis, left, q)?.try_mul(x)?.try_mul(&song_factor(basis, right, q)?)
}

/// The undeformed bilinear `b~_i^+ b~_j`, built by dressing the q-boson
/// bilinear. Independent of `q`.
pub fn classical_bilinear(basis: &FockBasis, i: usize, j: usize, q: &DeformationParameter) -> Result<Operator> {
    song_dress(basis, &bilinear(basis, i, j, q)?, i, j, q)
}

/// Undeformed triple with its one-body description.
#[derive(Clone, Debug)]
pub struct ClassicalTriple {
    pub label: String,
    pub e: OneBody,
    pub h: OneBody,
    pub e_plus: Operator,
    pub e_minus: Operator,
    pub h_op: Operator,
}

impl ClassicalTriple {
    pub fn from_one_body(label: impl Into<String>, e: OneBody, h: OneBody, basis: &FockBasis) -> Result<Self> {
        let e_plus = e.lift(basis)?;
        Self::with_operator(label, e, h, basis, e_plus)
    }

    /// Uses `e_plus` as built elsewhere (for example through q-boson
    /// composites) after checking it equals the lift of `e`.
    pub fn with_operator(label: impl Into<String>, e: OneBody, h: OneBody, basis: &FockBasis, e_plus: Operator) -> Result<Self> {
        let label = label.into();
        let lifted = e.lift(basis)?;
        let dev = e_plus.try_sub(&lifted)?.norm_inf();
        if dev > 1e-12 * lifted.norm_inf().max(1.0) {
            return Err(Error::Domain(format!("{label}: operator differs from its one-body form by {dev:e}")));
        }
        let hm = h.matrix();
        if (0..hm.nrows()).any(|i| (0..hm.ncols()).any(|j| i != j && hm[(i, j)] != 0.0)) {
            return Err(Error::Domain(format!("{label}: Cartan element must be diagonal")));
        }
        let h_op = h.lift(basis)?;
        let triple = Self { label, e_minus: e_plus.transpose(), e_plus, h_op, e, h };
        let report = check_sl2(&triple.as_chevalley()?, &DeformationParameter::classical(), 1e-12)?;
        if !report.passed() {
            return Err(Error::RelationFailure(format!(
                "{}: undeformed relations fail (max residual {:.3e})",
                triple.label,
                report.max_residual()
            )));
        }
        Ok(triple)
    }

    pub fn as_chevalley(&self) -> Result<ChevalleyTriple> {
        ChevalleyTriple::from_raising(self.label.clone(), self.e_plus.clone(), self.h_op.clone(), 1)
    }
}

/// Simultaneous eigenspace of the classical sl(2) Casimir (spin `j`) and
/// `j0 = h/2` (weight `m`), stored as an orthogonal projector.
#[derive(Clone, Debug)]
pub struct SpinBlock {
    pub two_j: u32,
    pub two_m: i32,
    pub projector: Operator,
}

/// Eigenvalue snapping tolerance for `j(j+1)`.
pub const CASIMIR_SNAP_TOL: f64 = 1e-8;

/// Decomposes the sector into `(j, m)` blocks using `C = j- j+ + j0(j0+1)`.
pub fn spin_blocks(classical: &ClassicalTriple) -> Result<Vec<SpinBlock>> {
    let space = classical.h_op.domain().clone();
    let dim = space.dim();
    let e = classical.e_plus.to_dense().map(|z| z.re);
    let hdiag: Vec<i32> = classical.h_op.diagonal_entries().iter().map(|z| z.re as i32).collect();
    let mut cas = e.transpose() * &e;
    for (i, &h) in hdiag.iter().enumerate() {
        let m = h as f64 / 2.0;
        cas[(i, i)] += m * (m + 1.0);
    }
    let mut weights: Vec<i32> = hdiag.clone();
    weights.sort_unstable();
    weights.dedup();
    let mut blocks = Vec::new();
    for &two_m in weights.iter().rev() {
        let idx: Vec<usize> = (0..dim).filter(|&i| hdiag[i] == two_m).collect();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| cas[(idx[a], idx[b])]);
        let eig = SymmetricEigen::new(sub);
        let mut by_j: Vec<(u32, Vec<usize>)> = Vec::new();
        for (k, &val) in eig.eigenvalues.iter().enumerate() {
            let j = (-1.0 + (1.0 + 4.0 * val).max(0.0).sqrt()) / 2.0;
            let two_j = (2.0 * j).round();
            let jj = two_j / 2.0;
            if (val - jj * (jj + 1.0)).abs() > CASIMIR_SNAP_TOL * val.abs().max(1.0) || two_j < two_m.abs() as f64 {
                return Err(Error::NotSl2(format!("Casimir eigenvalue {val} at 2m = {two_m} is not j(j+1)")));
            }
            if (two_j as i32 - two_m) % 2 != 0 {
                return Err(Error::NotSl2(format!("2j = {two_j} and 2m = {two_m} differ in parity")));
            }
            match by_j.iter_mut().find(|(t, _)| *t == two_j as u32) {
                Some((_, ks)) => ks.push(k),
                None => by_j.push((two_j as u32, vec![k])),
            }
        }
        by_j.sort_by_key(|(t, _)| *t);
        for (two_j, ks) in by_j {
            let mut triplets = Vec::new();
            for (a, &ia) in idx.iter().enumerate() {
                for (b, &ib) in idx.iter().enumerate() {
                    let p: f64 = ks.iter().map(|&k| eig.eigenvectors[(a, k)] * eig.eigenvectors[(b, k)]).sum();
                    if p != 0.0 {
                        triplets.push((ia, ib, c(p)));
                    }
                }
            }
            blocks.push(SpinBlock { two_j, two_m, projector: Operator::from_triplets(space.clone(), space.clone(), triplets) });
        }
    }
    Ok(blocks)
}

/// Ratio `sqrt([j-m]_q [j+m+1]_q / ((j-m)(j+m+1)))` applied to the
/// `(j, m) -> (j, m+1)` step; `1` at the top of a block.
pub fn cz_block_factor(two_j: u32, two_m: i32, q: &DeformationParameter) -> f64 {
    let (j, m) = (two_j as f64 / 2.0, two_m as f64 / 2.0);
    if two_m >= two_j as i32 {
        return 1.0;
    }
    let (a, b) = (j - m, j + m + 1.0);
    (q_number(a, q) * q_number(b, q) / (a * b)).sqrt()
}

/// Curtright-Zachos deformation `J+ = j+ Q`, `J0 = j0`, where `Q` is
/// diagonal in the `(j, m)` decomposition with entries [`cz_block_factor`].
/// The resulting matrix elements are exactly `sqrt([j-m]_q [j+m+1]_q)`,
/// hence `[J+, J-] = [2 J0]_q`. At `q = 1` the input is returned unchanged.
///
/// A phase `q` is accepted when `[n]_q > 0` up to `2 j_max + 1`.
pub fn cz_deform(classical: &ClassicalTriple, q: &DeformationParameter) -> Result<ChevalleyTriple> {
    let label = format!("cz({})", classical.label);
    if q.is_classical() {
        return ChevalleyTriple::from_raising(label, classical.e_plus.clone(), classical.h_op.clone(), 1);
    }
    let blocks = spin_blocks(classical)?;
    let two_j_max = blocks.iter().map(|b| b.two_j).max().unwrap_or(0);
    validate_parameter(q, two_j_max + 1).into_result()?;
    let space = classical.h_op.domain().clone();
    let mut dressing = Operator::zero(space.clone(), space);
    for b in &blocks {
        let f = cz_block_factor(b.two_j, b.two_m, q);
        dressing = dressing.try_add(&b.projector.scale_real(f))?;
    }
    let j_plus = classical.e_plus.try_mul(&dressing)?;
    ChevalleyTriple::from_raising(label, j_plus, classical.h_op.clone(), 1)
}

fn ratio(x: f64, q: &DeformationParameter) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        q_number(x, q) / x
    }
}

/// Closed-form Cartan dressing of a classical so(5) pair (see module docs),
/// evaluated entrywise with `0/0 -> 1`. Returns the dressed raising
/// generators.
pub fn sp4_cartan_dressing(
    e1: &Operator,
    e2: &Operator,
    h1: &Operator,
    h2: &Operator,
    q: &DeformationParameter,
) -> Result<(Operator, Operator)> {
    let d1: Vec<f64> = h1.diagonal_entries().iter().zip(h2.diagonal_entries()).map(|(a, b)| ratio(a.re + b.re + 1.0, q) * ratio(b.re, q)).collect();
    let d2: Vec<f64> = h2.diagonal_entries().iter().map(|b| ratio(b.re + 1.0, q) * ratio(-b.re - 2.0, q)).collect();
    let bad: Vec<usize> = d1.iter().zip(&d2).enumerate().filter(|(_, (a, b))| **a < 0.0 || **b < 0.0).map(|(i, _)| i).collect();
    if !bad.is_empty() {
        return Err(Error::RadicandSign(bad));
    }
    let space = h1.domain().clone();
    let d1 = Operator::diagonal(space.clone(), d1.into_iter().map(|x| c(x.sqrt())).collect());
    let d2 = Operator::diagonal(space, d2.into_iter().map(|x| c(x.sqrt())).collect());
    let pref = c(2.0) / (q.value() + q.inverse().value());
    Ok((e1.try_mul(&d1)?, e2.try_mul(&d2)?.scale(pref)))
}

/// q-boson so_q(5) on five modes `m = [a, b, c, d, e]`:
///
/// `E1 = { sqrt(q^Na + q^-Na) b_a^+ b_b sqrt(q^Nb + q^-Nb) q^{-(Nd - Ne)}
///       + sqrt(q^Nd + q^-Nd) b_d^+ b_e sqrt(q^Ne + q^-Ne) q^{Na - Nb} } / (q + 1/q)`,
/// `E2 = q^{Nd - Nc/2} sqrt(q^Nb + q^-Nb) b_b^+ b_c + b_c^+ b_d q^{Nb - Nc/2} sqrt(q^Nd + q^-Nd)`,
/// `H1 = Na - Nb + Nd - Ne`, `H2 = 2 (Nb - Nd)`.
///
/// Node 1 is long: `d = (2, 1)`.
pub fn soq5_vector_realization(basis: &FockBasis, m: [usize; 5], q: &DeformationParameter) -> Result<[ChevalleyTriple; 2]> {
    let [a, b, cc, d, e] = m;
    let sq = |k| sqrt_q_sum(basis, k, q);
    let e1 = sq(a)?
        .try_mul(&bilinear(basis, a, b, q)?)?
        .try_mul(&sq(b)?)?
        .try_mul(&q_power(basis, q, move |s| -(s[d] as f64 - s[e] as f64)))?
        .try_add(
            &sq(d)?
                .try_mul(&bilinear(basis, d, e, q)?)?
                .try_mul(&sq(e)?)?
                .try_mul(&q_power(basis, q, move |s| s[a] as f64 - s[b] as f64))?,
        )?
        .scale(c(1.0) / (q.value() + q.inverse().value()));
    let e2 = q_power(basis, q, move |s| s[d] as f64 - s[cc] as f64 / 2.0)
        .try_mul(&sq(b)?)?
        .try_mul(&bilinear(basis, b, cc, q)?)?
        .try_add(
            &bilinear(basis, cc, d, q)?
                .try_mul(&q_power(basis, q, move |s| s[b] as f64 - s[cc] as f64 / 2.0))?
                .try_mul(&sq(d)?)?,
        )?;
    let h1 = basis.diagonal(|s| c(s[a] as f64 - s[b] as f64 + s[d] as f64 - s[e] as f64));
    let h2 = basis.diagonal(|s| c(2.0 * (s[b] as f64 - s[d] as f64)));
    Ok([ChevalleyTriple::from_raising("E1", e1, h1, 2)?, ChevalleyTriple::from_raising("E2", e2, h2, 1)?])
}

/// One-body frame taking the standard vector form
/// `E1 = b0^+ b1 + b3^+ b4`, `E2 = sqrt(2) (b1^+ b2 + b2^+ b3)`,
/// `H1 = N0 - N1 + N3 - N4`, `H2 = 2 (N1 - N3)` to the given classical pair.
/// Columns `0..5` are the frame modes; the rest complete an orthonormal basis.
pub fn so5_vector_frame(pair: &[ClassicalTriple; 2]) -> Result<DMatrix<f64>> {
    let (m1, m2) = (pair[0].e.matrix(), pair[1].e.matrix());
    let (h1, h2) = (pair[0].h.matrix(), pair[1].h.matrix());
    let n = m1.nrows();
    if n < 5 {
        return Err(Error::Domain(format!("an so(5) vector frame needs at least 5 modes, got {n}")));
    }
    let id = DMatrix::<f64>::identity(n, n);
    let mut stacked = DMatrix::zeros(4 * n, n);
    for (k, blk) in [m1.clone(), m2.clone(), h1 - &id, h2.clone()].iter().enumerate() {
        stacked.view_mut((k * n, 0), (n, n)).copy_from(blk);
    }
    let gram = stacked.transpose() * &stacked;
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    if eig.eigenvalues[order[0]] > 1e-20 || eig.eigenvalues[order[1]] < 1e-8 {
        return Err(Error::Domain("classical pair has no unique highest weight (1, 0); not a vector-type so(5)".into()));
    }
    let mut top = eig.eigenvectors.column(order[0]).into_owned();
    // fix the sign by the largest component
    let imax = top.iamax();
    if top[imax] < 0.0 {
        top = -top;
    }
    let s2 = 2f64.sqrt();
    let ub = m1.transpose() * &top;
    let uc = m2.transpose() * &ub / s2;
    let ud = m2.transpose() * &uc / s2;
    let ue = m1.transpose() * &ud;
    let mut frame = DMatrix::zeros(n, n);
    for (k, v) in [&top, &ub, &uc, &ud, &ue].into_iter().enumerate() {
        frame.set_column(k, v);
    }
    let mut filled = 5;
    for k in 0..n {
        if filled == n {
            break;
        }
        let mut v = id.column(k).into_owned();
        for col in 0..filled {
            let u = frame.column(col).into_owned();
            v -= &u * u.dot(&v);
        }
        if v.norm() > 0.5 {
            frame.set_column(filled, &(v.normalize()));
            filled += 1;
        }
    }
    let standard = [
        OneBody::from_terms(n, &[(0, 1, 1.0), (3, 4, 1.0)]),
        OneBody::from_terms(n, &[(1, 2, s2), (2, 3, s2)]),
        OneBody::from_terms(n, &[(0, 0, 1.0), (1, 1, -1.0), (3, 3, 1.0), (4, 4, -1.0)]),
        OneBody::from_terms(n, &[(1, 1, 2.0), (3, 3, -2.0)]),
    ];
    let targets = [m1, m2, h1, h2];
    let orth = (frame.transpose() * &frame - &id).abs().max();
    let mut dev = orth;
    for (s, t) in standard.iter().zip(targets) {
        dev = dev.max((&frame * s.matrix() * frame.transpose() - t).abs().max());
    }
    if dev > 1e-10 {
        return Err(Error::Domain(format!("classical pair is not of standard so(5) vector form (deviation {dev:e})")));
    }
    Ok(frame)
}

/// so(5) -> so_q(5) for a classical pair of one-body generators: the q-boson
/// realization [`soq5_vector_realization`] is applied in the pair's vector
/// frame and transported back by the induced Fock-space rotation. Cartan
/// elements are returned unchanged; at `q = 1` the output equals the input.
pub fn sp4_deform(pair: &[ClassicalTriple; 2], basis: &FockBasis, q: &DeformationParameter) -> Result<[ChevalleyTriple; 2]> {
    let frame = so5_vector_frame(pair)?;
    let rot = induced_unitary(basis, &frame)?;
    let rot_t = rot.transpose();
    let std = soq5_vector_realization(basis, [0, 1, 2, 3, 4], q)?;
    let mut out = Vec::with_capacity(2);
    for (k, (s, cl)) in std.iter().zip(pair).enumerate() {
        let e_plus = if q.is_classical() {
            cl.e_plus.clone()
        } else {
            rot.try_mul(&s.e_plus)?.try_mul(&rot_t)?.pruned(1e-14)
        };
        out.push(ChevalleyTriple::from_raising(format!("E{}", k + 1), e_plus, cl.h_op.clone(), s.d)?);
    }
    let e2 = out.pop().expect("two triples");
    let e1 = out.pop().expect("two triples");
    Ok([e1, e2])
}
