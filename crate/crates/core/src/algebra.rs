//! Chevalley generators, relation checks and the small bosonic
//! realizations of sl_q(2) and so_q(3).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::fock::{bilinear, number_op, q_power, sqrt_q_sum, FockBasis};
use crate::operator::Operator;
use crate::qnum::{q_binomial, q_number, DeformationParameter};
use crate::{Error, Result};

/// Default relation tolerance (infinity norm).
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

/// `[A, B]_s = AB - s BA`.
pub fn q_commutator(a: &Operator, b: &Operator, s: Complex64) -> Result<Operator> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?.scale(s))
}

/// `[h]_q` evaluated entrywise on a diagonal operator.
pub fn q_bracket_diag(h: &Operator, q: &DeformationParameter) -> Result<Operator> {
    h.map_diagonal(|z| Complex64::new(q_number(z.re, q), 0.0))
}

/// Raising, lowering and Cartan generator attached to one Dynkin node,
/// with the length exponent `d` (the node uses `q^d`).
#[derive(Clone, Debug)]
pub struct ChevalleyTriple {
    pub label: String,
    pub e_plus: Operator,
    pub e_minus: Operator,
    pub h: Operator,
    pub d: u32,
}

impl ChevalleyTriple {
    /// Checks that `h` is diagonal with integer entries and, for real `q`,
    /// that `e_minus` is the adjoint of `e_plus`.
    pub fn new(
        label: impl Into<String>,
        e_plus: Operator,
        e_minus: Operator,
        h: Operator,
        d: u32,
        q: &DeformationParameter,
    ) -> Result<Self> {
        let t = Self::validated(label.into(), e_plus, e_minus, h, d)?;
        if q.is_real() {
            let dev = t.e_minus.try_sub(&t.e_plus.adjoint())?.max_abs();
            if dev > 1e-12 * t.e_plus.max_abs().max(1.0) {
                return Err(Error::Domain(format!("{}: E- is not the adjoint of E+ (deviation {dev:e})", t.label)));
            }
        }
        Ok(t)
    }

    /// Lowering generator taken as the transpose of `e_plus`.
    ///
    /// Every q-boson formula in this crate has real ladder amplitudes and
    /// diagonal q-power dressings, so the transpose is the realization's
    /// lowering operator for real and phase `q` alike; for real `q` it is
    /// the adjoint.
    pub fn from_raising(label: impl Into<String>, e_plus: Operator, h: Operator, d: u32) -> Result<Self> {
        let e_minus = e_plus.transpose();
        Self::validated(label.into(), e_plus, e_minus, h, d)
    }

    fn validated(label: String, e_plus: Operator, e_minus: Operator, h: Operator, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain(format!("{label}: length exponent must be positive")));
        }
        for op in [&e_plus, &e_minus] {
            if op.domain() != h.domain() || op.codomain() != h.domain() {
                return Err(Error::SpaceMismatch { left: h.domain().clone(), right: op.domain().clone() });
            }
        }
        if !h.is_diagonal() || h.diagonal_entries().iter().any(|z| z.im != 0.0 || z.re.fract() != 0.0) {
            return Err(Error::Domain(format!("{label}: Cartan element must be diagonal with integer entries")));
        }
        Ok(Self { label, e_plus, e_minus, h, d })
    }

    pub fn is_adjoint_pair(&self) -> bool {
        self.e_minus == self.e_plus.adjoint()
    }
}

/// A named set of Chevalley triples with auxiliary Cartan elements and the
/// Cartan matrix `a_ij` (defined by `[h_i, e_j^+] = a_ij e_j^+`).
#[derive(Clone, Debug)]
pub struct AlgebraRealization {
    pub name: String,
    pub triples: Vec<ChevalleyTriple>,
    pub extra_cartans: Vec<(String, Operator)>,
    pub cartan_matrix: Vec<Vec<i32>>,
}

impl AlgebraRealization {
    pub fn new(
        name: impl Into<String>,
        triples: Vec<ChevalleyTriple>,
        extra_cartans: Vec<(String, Operator)>,
        cartan_matrix: Vec<Vec<i32>>,
    ) -> Result<Self> {
        let name = name.into();
        let r = triples.len();
        if cartan_matrix.len() != r || cartan_matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Domain(format!("{name}: Cartan matrix must be {r}x{r}")));
        }
        for i in 0..r {
            if cartan_matrix[i][i] != 2 {
                return Err(Error::Domain(format!("{name}: a_{i}{i} must be 2")));
            }
            for j in 0..r {
                let (di, dj) = (triples[i].d as i32, triples[j].d as i32);
                if di * cartan_matrix[i][j] != dj * cartan_matrix[j][i] {
                    return Err(Error::Domain(format!("{name}: d_i a_ij != d_j a_ji for ({i}, {j})")));
                }
            }
        }
        Ok(Self { name, triples, extra_cartans, cartan_matrix })
    }

    pub fn rank(&self) -> usize {
        self.triples.len()
    }
}

/// Reads off `a_ij` from `[h_i, e_j^+] = a_ij e_j^+` using the largest entry
/// of each `e_j^+`. The caller still has to verify the relation.
pub fn discover_cartan_matrix(triples: &[ChevalleyTriple]) -> Result<Vec<Vec<i32>>> {
    triples
        .iter()
        .map(|ti| {
            triples
                .iter()
                .map(|tj| {
                    let (r, c, z) = tj
                        .e_plus
                        .iter()
                        .max_by(|a, b| a.2.norm().total_cmp(&b.2.norm()))
                        .ok_or_else(|| Error::Domain(format!("{} vanishes on this sector", tj.label)))?;
                    let w = commutator(&ti.h, &tj.e_plus)?.get(r, c) / z;
                    Ok(w.re.round() as i32)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationEntry {
    pub id: String,
    pub residual: f64,
    pub pass: bool,
}

/// Residuals of a set of relations, in insertion order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub tol: f64,
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn new(tol: f64) -> Self {
        Self { tol, entries: Vec::new() }
    }

    pub fn push(&mut self, id: impl Into<String>, residual: f64) {
        let residual = residual.abs();
        let pass = residual < self.tol;
        self.entries.push(RelationEntry { id: id.into(), residual, pass });
    }

    /// Entry that passes only with a residual of exactly zero.
    pub fn push_exact(&mut self, id: impl Into<String>, residual: f64) {
        let residual = residual.abs();
        self.entries.push(RelationEntry { id: id.into(), residual, pass: residual == 0.0 });
    }

    /// Appends `other`'s entries with `prefix/` prepended to their ids.
    pub fn extend_prefixed(&mut self, prefix: &str, other: RelationReport) {
        for mut e in other.entries {
            e.id = format!("{prefix}/{}", e.id);
            self.entries.push(e);
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn get(&self, id: &str) -> Option<&RelationEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// One line per relation: `id residual PASS|FAIL`, then a summary line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "{} {:.6e} {}", e.id, e.residual, if e.pass { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(
            s,
            "max_residual {:.6e} tol {:.1e} {}",
            self.max_residual(),
            self.tol,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        s
    }
}

fn label(i: usize) -> usize {
    i + 1
}

/// `[e_i^+, e_j^-] = delta_ij [h_i]_{q_i}`, `[h_i, h_j] = 0` and
/// `[h_i, e_j^+-] = +-a_ij e_j^+-` for all node pairs.
pub fn check_chevalley(realization: &AlgebraRealization, q: &DeformationParameter, tol: f64) -> Result<RelationReport> {
    let mut report = RelationReport::new(tol);
    let ts = &realization.triples;
    for (i, ti) in ts.iter().enumerate() {
        let qi = q.powi(ti.d);
        for (j, tj) in ts.iter().enumerate() {
            let (li, lj) = (label(i), label(j));
            let mut c = commutator(&ti.e_plus, &tj.e_minus)?;
            if i == j {
                c = c.try_sub(&q_bracket_diag(&ti.h, &qi)?)?;
                report.push(format!("[e{li}+,e{li}-]-[h{li}]"), c.norm_inf());
            } else {
                report.push(format!("[e{li}+,e{lj}-]"), c.norm_inf());
            }
            if i < j {
                report.push(format!("[h{li},h{lj}]"), commutator(&ti.h, &tj.h)?.norm_inf());
            }
            let a = realization.cartan_matrix[i][j] as f64;
            let rp = commutator(&ti.h, &tj.e_plus)?.try_sub(&tj.e_plus.scale_real(a))?;
            report.push(format!("[h{li},e{lj}+]-a{li}{lj}e{lj}+"), rp.norm_inf());
            let rm = commutator(&ti.h, &tj.e_minus)?.try_add(&tj.e_minus.scale_real(a))?;
            report.push(format!("[h{li},e{lj}-]+a{li}{lj}e{lj}-"), rm.norm_inf());
        }
        for (name, x) in &realization.extra_cartans {
            report.push(format!("[{name},h{}]", label(i)), commutator(x, &ti.h)?.norm_inf());
        }
    }
    Ok(report)
}

/// q-Serre relations for every ordered pair `i != j`, for raising and
/// lowering generators.
pub fn check_serre(realization: &AlgebraRealization, q: &DeformationParameter, tol: f64) -> Result<RelationReport> {
    let mut report = RelationReport::new(tol);
    let ts = &realization.triples;
    for (i, ti) in ts.iter().enumerate() {
        let qi = q.powi(ti.d);
        for (j, tj) in ts.iter().enumerate() {
            if i == j {
                continue;
            }
            let m = 1 - realization.cartan_matrix[i][j] as i64;
            for (sign, ei, ej) in [("+", &ti.e_plus, &tj.e_plus), ("-", &ti.e_minus, &tj.e_minus)] {
                let r = serre_sum(ei, ej, m, &qi)?;
                report.push(format!("serre(e{}{sign},e{}{sign})", label(i), label(j)), r.norm_inf());
            }
        }
    }
    Ok(report)
}

fn serre_sum(ei: &Operator, ej: &Operator, m: i64, qi: &DeformationParameter) -> Result<Operator> {
    let space = ei.domain().clone();
    let mut powers = vec![Operator::identity(space.clone())];
    for k in 1..=m as usize {
        powers.push(powers[k - 1].try_mul(ei)?);
    }
    let mut acc = Operator::zero(space.clone(), space);
    for n in 0..=m {
        let coef = if n % 2 == 0 { 1.0 } else { -1.0 } * q_binomial(m, n, qi)?;
        let term = powers[(m - n) as usize].try_mul(ej)?.try_mul(&powers[n as usize])?;
        acc = acc.try_add(&term.scale_real(coef))?;
    }
    Ok(acc)
}

/// Checks a single triple against the sl_q(2) relations.
pub fn check_sl2(triple: &ChevalleyTriple, q: &DeformationParameter, tol: f64) -> Result<RelationReport> {
    let r = AlgebraRealization::new(triple.label.clone(), vec![triple.clone()], Vec::new(), vec![vec![2]])?;
    check_chevalley(&r, q, tol)
}

/// sl_q(2) Casimir `E- E+ + [J0]_q [J0 + 1]_q` with `J0 = h / 2`, using the
/// node parameter `q^d`. Its eigenvalue on a spin-j block is `[j]_q [j+1]_q`.
pub fn casimir_slq2(triple: &ChevalleyTriple, q: &DeformationParameter) -> Result<Operator> {
    let report = check_sl2(triple, q, DEFAULT_TOL)?;
    if !report.passed() {
        return Err(Error::RelationFailure(format!(
            "{} is not an sl_q(2) triple on this space (max residual {:.3e})",
            triple.label,
            report.max_residual()
        )));
    }
    let qi = q.powi(triple.d);
    let diag = triple.h.map_diagonal(|z| {
        let m = z.re / 2.0;
        Complex64::new(q_number(m, &qi) * q_number(m + 1.0, &qi), 0.0)
    })?;
    triple.e_minus.try_mul(&triple.e_plus)?.try_add(&diag)
}

/// Triple on `V (x) W` given by the coproduct
/// `D(e) = e (x) q^{h/2} + q^{-h/2} (x) e`, `D(h) = h (x) 1 + 1 (x) h`.
pub fn coproduct_rep(v: &ChevalleyTriple, w: &ChevalleyTriple, q: &DeformationParameter) -> Result<ChevalleyTriple> {
    if v.d != w.d {
        return Err(Error::Domain(format!("coproduct needs equal length exponents, got {} and {}", v.d, w.d)));
    }
    let qi = q.powi(v.d);
    let half = |h: &Operator, s: f64| h.map_diagonal(|z| qi.pow(s * z.re / 2.0));
    let kv_inv = half(&v.h, -1.0)?;
    let kw = half(&w.h, 1.0)?;
    let lift = |ev: &Operator, ew: &Operator| ev.kron(&kw).try_add(&kv_inv.kron(ew));
    let e_plus = lift(&v.e_plus, &w.e_plus)?;
    let e_minus = lift(&v.e_minus, &w.e_minus)?;
    let iv = Operator::identity(v.h.domain().clone());
    let iw = Operator::identity(w.h.domain().clone());
    let h = v.h.kron(&iw).try_add(&iv.kron(&w.h))?;
    ChevalleyTriple::new(format!("D({},{})", v.label, w.label), e_plus, e_minus, h, v.d, q)
}

/// Components `T^k_m` of a q-tensor keyed by `2m`.
pub type TensorComponents = BTreeMap<i32, Operator>;

/// Checks `[J+-, T_m]_{q^-m} q^{-J0} = sqrt([k -+ m][k +- m + 1]) T_{m+-1}`
/// and `[J0, T_m] = m T_m`. Components may map between different spaces, so
/// the sl_q(2) action is given separately on the domain and the codomain.
pub fn check_q_tensor(
    j_domain: &ChevalleyTriple,
    j_codomain: &ChevalleyTriple,
    components: &TensorComponents,
    two_k: u32,
    q: &DeformationParameter,
    tol: f64,
) -> Result<RelationReport> {
    let two_k = two_k as i32;
    let qi = q.powi(j_domain.d);
    for two_m in (-two_k..=two_k).step_by(2) {
        if !components.contains_key(&two_m) {
            return Err(Error::MissingComponent { two_m });
        }
    }
    let k = two_k as f64 / 2.0;
    let j0_dom = j_domain.h.scale_real(0.5);
    let j0_cod = j_codomain.h.scale_real(0.5);
    let q_mj0 = j_domain.h.map_diagonal(|z| qi.pow(-z.re / 2.0))?;
    let mut report = RelationReport::new(tol);
    for (&two_m, t) in components {
        let m = two_m as f64 / 2.0;
        let id = format!("{two_m}/2");
        for (sign, s, jc, jd) in [
            ("+", 1.0, &j_codomain.e_plus, &j_domain.e_plus),
            ("-", -1.0, &j_codomain.e_minus, &j_domain.e_minus),
        ] {
            let lhs = jc.try_mul(t)?.try_sub(&t.try_mul(jd)?.scale(qi.pow(-m)))?.try_mul(&q_mj0)?;
            let target = two_m + 2 * s as i32;
            let coef = (q_number(k - s * m, &qi) * q_number(k + s * m + 1.0, &qi)).max(0.0).sqrt();
            let r = match components.get(&target) {
                Some(next) => lhs.try_sub(&next.scale_real(coef))?,
                None => lhs,
            };
            report.push(format!("[J{sign},T{id}]"), r.norm_inf());
        }
        let r0 = j0_cod.try_mul(t)?.try_sub(&t.try_mul(&j0_dom)?)?.try_sub(&t.scale_real(m))?;
        report.push(format!("[J0,T{id}]"), r0.norm_inf());
    }
    Ok(report)
}

/// gl_q(n) on an `n`-mode sector: `e_i^+ = b_i^+ b_{i+1}`,
/// `h_i = N_i - N_{i+1}`, A_{n-1} Cartan matrix, plus `h0 = sum_j N_j`.
pub fn build_glq(basis: &FockBasis, q: &DeformationParameter) -> Result<AlgebraRealization> {
    let n = basis.n_modes();
    if n < 2 {
        return Err(Error::Domain("gl_q(n) needs at least two modes".into()));
    }
    build_glq_prefix(basis, n, q)
}

/// gl_q(n) realized on the first `n` modes of a possibly larger sector.
pub fn build_glq_prefix(basis: &FockBasis, n: usize, q: &DeformationParameter) -> Result<AlgebraRealization> {
    if n < 2 || n > basis.n_modes() {
        return Err(Error::Domain(format!("gl_q({n}) does not fit in {} modes", basis.n_modes())));
    }
    let mut triples = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let h = number_op(basis, i)?.try_sub(&number_op(basis, i + 1)?)?;
        triples.push(ChevalleyTriple::new(
            format!("e{}", i + 1),
            bilinear(basis, i, i + 1, q)?,
            bilinear(basis, i + 1, i, q)?,
            h,
            1,
            q,
        )?);
    }
    let h0 = basis.diagonal(|s| Complex64::new(s[..n].iter().sum::<u32>() as f64, 0.0));
    let cartan = (0..n - 1)
        .map(|i| {
            (0..n - 1)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    AlgebraRealization::new(format!("gl_q({n})"), triples, vec![("h0".into(), h0)], cartan)
}

/// `[n_k, e_j^+-] = +-(delta_kj - delta_{k-1,j}) e_j^+-` for the number
/// operators of the first `rank + 1` modes of a gl_q realization.
pub fn check_gl_number_weights(basis: &FockBasis, realization: &AlgebraRealization, tol: f64) -> Result<RelationReport> {
    let mut report = RelationReport::new(tol);
    for k in 0..=realization.rank() {
        let nk = number_op(basis, k)?;
        for (j, t) in realization.triples.iter().enumerate() {
            let w = (k == j) as i32 as f64 - (k == j + 1) as i32 as f64;
            let rp = commutator(&nk, &t.e_plus)?.try_sub(&t.e_plus.scale_real(w))?;
            let rm = commutator(&nk, &t.e_minus)?.try_add(&t.e_minus.scale_real(w))?;
            report.push(format!("[n{},e{}+]", k + 1, j + 1), rp.norm_inf());
            report.push(format!("[n{},e{}-]", k + 1, j + 1), rm.norm_inf());
        }
    }
    Ok(report)
}

/// sl_q(2) from two q-bosons: `J+ = b1^+ b2`, `J- = b2^+ b1`,
/// `2 J0 = N1 - N2`. Sector `N` carries spin `N / 2`.
pub fn build_slq2_bosonic(basis: &FockBasis, q: &DeformationParameter) -> Result<ChevalleyTriple> {
    if basis.n_modes() != 2 {
        return Err(Error::Domain(format!("sl_q(2) bosonic realization needs 2 modes, got {}", basis.n_modes())));
    }
    let h = number_op(basis, 0)?.try_sub(&number_op(basis, 1)?)?;
    ChevalleyTriple::new("J", bilinear(basis, 0, 1, q)?, bilinear(basis, 1, 0, q)?, h, 1, q)
}

/// Angular momentum generators `L+, L-, L0`.
#[derive(Clone, Debug)]
pub struct So3Generators {
    pub l_plus: Operator,
    pub l_minus: Operator,
    pub l_zero: Operator,
}

impl So3Generators {
    /// The same generators as a Chevalley triple with `h = 2 L0`.
    pub fn as_triple(&self, label: &str) -> Result<ChevalleyTriple> {
        ChevalleyTriple::validated(
            label.to_string(),
            self.l_plus.clone(),
            self.l_minus.clone(),
            self.l_zero.scale_real(2.0),
            1,
        )
    }

    /// `[L+, L-] = [2 L0]_q` and `[L0, L+-] = +-L+-`.
    pub fn check(&self, q: &DeformationParameter, tol: f64) -> Result<RelationReport> {
        let mut report = RelationReport::new(tol);
        let two_l0 = self.l_zero.scale_real(2.0);
        let r = commutator(&self.l_plus, &self.l_minus)?.try_sub(&q_bracket_diag(&two_l0, q)?)?;
        report.push("[L+,L-]-[2L0]", r.norm_inf());
        let rp = commutator(&self.l_zero, &self.l_plus)?.try_sub(&self.l_plus)?;
        report.push("[L0,L+]-L+", rp.norm_inf());
        let rm = commutator(&self.l_zero, &self.l_minus)?.try_add(&self.l_minus)?;
        report.push("[L0,L-]+L-", rm.norm_inf());
        Ok(report)
    }
}

/// Nonstandard so_q(3) on three q-bosons ordered `(m = +1, 0, -1)`:
///
/// `L+ = q^{N-1} q^{-N0/2} sqrt(q^{N1} + q^{-N1}) b1^+ b0
///     + b0^+ b-1 q^{N1} q^{-N0/2} sqrt(q^{N-1} + q^{-N-1})`,
/// `L-` the mirrored expression and `L0 = N1 - N-1`.
pub fn build_soq3_nonstandard(basis: &FockBasis, q: &DeformationParameter) -> Result<So3Generators> {
    if basis.n_modes() != 3 {
        return Err(Error::Domain(format!("so_q(3) realization needs 3 modes, got {}", basis.n_modes())));
    }
    let (p, z, m) = (0, 1, 2);
    let dress = |a: usize| q_power(basis, q, move |s| s[a] as f64 - s[z] as f64 / 2.0);
    let sq_p = sqrt_q_sum(basis, p, q)?;
    let sq_m = sqrt_q_sum(basis, m, q)?;
    let l_plus = dress(m)
        .try_mul(&sq_p)?
        .try_mul(&bilinear(basis, p, z, q)?)?
        .try_add(&bilinear(basis, z, m, q)?.try_mul(&dress(p))?.try_mul(&sq_m)?)?;
    let l_minus = bilinear(basis, z, p, q)?
        .try_mul(&dress(m))?
        .try_mul(&sq_p)?
        .try_add(&dress(p).try_mul(&sq_m)?.try_mul(&bilinear(basis, m, z, q)?)?)?;
    let l_zero = number_op(basis, p)?.try_sub(&number_op(basis, m)?)?;
    Ok(So3Generators { l_plus, l_minus, l_zero })
}

/// Measured closure of a set `(L+, L-, L0)`: the diagonal of `[L+, L-]`,
/// its off-diagonal weight, and the distance to `[2 L0]_q`.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureMeasurement {
    pub commutator_diagonal: Vec<f64>,
    pub off_diagonal_norm: f64,
    pub distance_to_q_bracket: f64,
}

pub fn measure_so3_closure(set: &So3Generators, q: &DeformationParameter) -> Result<ClosureMeasurement> {
    let c = commutator(&set.l_plus, &set.l_minus)?;
    let commutator_diagonal = c.diagonal_entries().iter().map(|z| z.re).collect();
    let off = Operator::from_triplets(
        c.domain().clone(),
        c.codomain().clone(),
        c.iter().filter(|(r, col, _)| r != col).collect::<Vec<_>>(),
    );
    let target = q_bracket_diag(&set.l_zero.scale_real(2.0), q)?;
    Ok(ClosureMeasurement {
        commutator_diagonal,
        off_diagonal_norm: off.norm_inf(),
        distance_to_q_bracket: c.try_sub(&target)?.norm_inf(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::creation_op;

    fn real(q: f64) -> DeformationParameter {
        DeformationParameter::real(q).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn commutator_basics() {
        let b = FockBasis::new(3, 2).unwrap();
        let q = real(1.3);
        let a = bilinear(&b, 0, 1, &q).unwrap();
        let e = bilinear(&b, 1, 2, &q).unwrap();
        assert_eq!(commutator(&a, &a).unwrap().nnz(), 0);
        assert_eq!(q_commutator(&a, &e, c(1.0)).unwrap(), commutator(&a, &e).unwrap());
        let n0 = number_op(&b, 0).unwrap();
        assert!((&commutator(&n0, &a).unwrap() - &a).norm_inf() == 0.0);
    }

    #[test]
    fn glq_examples() {
        let b = FockBasis::new(6, 3).unwrap();
        let q = real(1.3);
        let g = build_glq(&b, &q).unwrap();
        assert_eq!(g.rank(), 5);
        let h0 = &g.extra_cartans[0].1;
        assert_eq!(h0, &Operator::identity(b.space()).scale_real(3.0));
        assert!(check_chevalley(&g, &q, 1e-10).unwrap().max_residual() < 1e-10);
        assert!(check_serre(&g, &q, 1e-10).unwrap().max_residual() < 1e-10);
        assert!(check_gl_number_weights(&b, &g, 1e-12).unwrap().passed());
        // N = 1 at q = 1: fundamental representation of gl(6)
        let b1 = FockBasis::new(6, 1).unwrap();
        let g1 = build_glq(&b1, &DeformationParameter::classical()).unwrap();
        assert_eq!(g1.triples[0].e_plus.get(0, 1), c(1.0));
        assert_eq!(g1.triples[0].e_plus.nnz(), 1);
    }

    #[test]
    fn glq2_fundamental_is_exact() {
        for q in [real(0.7), real(2.0), DeformationParameter::phase(0.4).unwrap()] {
            let b = FockBasis::new(2, 1).unwrap();
            let g = build_glq(&b, &q).unwrap();
            assert_eq!(check_chevalley(&g, &q, 1e-15).unwrap().max_residual(), 0.0);
        }
    }

    #[test]
    fn wrong_length_exponent_is_detected() {
        let b = FockBasis::new(6, 3).unwrap();
        let q = real(1.3);
        let mut g = build_glq(&b, &q).unwrap();
        g.triples[0].d = 2;
        let report = check_chevalley(&g, &q, 1e-9).unwrap();
        assert!(report.max_residual() > 1e-3);
        assert!(!report.passed());
        // the symmetrizability check refuses this data
        assert!(AlgebraRealization::new("bad", g.triples.clone(), vec![], g.cartan_matrix.clone()).is_err());
    }

    #[test]
    fn serre_for_commuting_nodes_is_a_commutator() {
        let b = FockBasis::new(6, 3).unwrap();
        let q = real(1.3);
        let g = build_glq(&b, &q).unwrap();
        let rep = check_serre(&g, &q, 1e-9).unwrap();
        assert_eq!(rep.get("serre(e1+,e3+)").unwrap().residual, 0.0);
        assert!(rep.get("serre(e1+,e2+)").unwrap().residual < 1e-10);
        let g1 = build_glq(&b, &DeformationParameter::classical()).unwrap();
        assert!(check_serre(&g1, &DeformationParameter::classical(), 1e-12).unwrap().max_residual() < 1e-12);
    }

    #[test]
    fn casimir_eigenvalues() {
        let q = real(2.0);
        let b0 = FockBasis::new(2, 0).unwrap();
        let t0 = build_slq2_bosonic(&b0, &q).unwrap();
        assert_eq!(casimir_slq2(&t0, &q).unwrap().norm_inf(), 0.0);
        let b2 = FockBasis::new(2, 2).unwrap();
        let t2 = build_slq2_bosonic(&b2, &q).unwrap();
        let cas = casimir_slq2(&t2, &q).unwrap();
        let want = Operator::identity(b2.space()).scale_real(2.5);
        assert!((&cas - &want).norm_inf() < 1e-12);
        assert!(commutator(&cas, &t2.e_plus).unwrap().norm_inf() < 1e-10);
    }

    #[test]
    fn slq2_examples() {
        let q = real(2.0);
        let b1 = FockBasis::new(2, 1).unwrap();
        let t = build_slq2_bosonic(&b1, &q).unwrap();
        let c1 = commutator(&t.e_plus, &t.e_minus).unwrap();
        assert_eq!(c1.diagonal_entries(), vec![c(1.0), c(-1.0)]);
        let b2 = FockBasis::new(2, 2).unwrap();
        let t = build_slq2_bosonic(&b2, &q).unwrap();
        // <1,1|J+|1,0>: (1,1) -> (2,0)
        assert!((t.e_plus.get(0, 1).re - 1.58114).abs() < 1e-5);
        for n in 0..=4 {
            let b = FockBasis::new(2, n).unwrap();
            let t = build_slq2_bosonic(&b, &real(1.3)).unwrap();
            assert!(check_sl2(&t, &real(1.3), 1e-12).unwrap().max_residual() < 1e-12);
        }
        assert!(build_slq2_bosonic(&FockBasis::new(3, 1).unwrap(), &q).is_err());
    }

    #[test]
    fn coproduct_of_fundamentals() {
        let q = real(1.3);
        let b = FockBasis::new(2, 1).unwrap();
        let t = build_slq2_bosonic(&b, &q).unwrap();
        let d = coproduct_rep(&t, &t, &q).unwrap();
        assert!(check_sl2(&d, &q, 1e-12).unwrap().max_residual() < 1e-12);
        // additive weights: (1, 1) -> 2
        assert_eq!(d.h.get(0, 0), c(2.0));
        assert_eq!(d.h.get(1, 1), c(0.0));
        // q = 1 gives e (x) 1 + 1 (x) e
        let one = DeformationParameter::classical();
        let t1 = build_slq2_bosonic(&b, &one).unwrap();
        let d1 = coproduct_rep(&t1, &t1, &one).unwrap();
        let id = Operator::identity(b.space());
        let plain = &t1.e_plus.kron(&id) + &id.kron(&t1.e_plus);
        assert_eq!((&d1.e_plus - &plain).norm_inf(), 0.0);
    }

    fn dressed_doublet(n: u32, q: &DeformationParameter, undressed: bool) -> (ChevalleyTriple, ChevalleyTriple, TensorComponents) {
        let from = FockBasis::new(2, n).unwrap();
        let to = FockBasis::new(2, n + 1).unwrap();
        let jd = build_slq2_bosonic(&from, q).unwrap();
        let jc = build_slq2_bosonic(&to, q).unwrap();
        let mut t1 = creation_op(&from, &to, 0, q).unwrap();
        let mut t2 = creation_op(&from, &to, 1, q).unwrap();
        if !undressed {
            t1 = &t1 * &q_power(&from, q, |s| -(s[1] as f64) / 2.0);
            t2 = &t2 * &q_power(&from, q, |s| s[0] as f64 / 2.0);
        }
        (jd, jc, BTreeMap::from([(1, t1), (-1, t2)]))
    }

    #[test]
    fn q_tensor_examples() {
        let q = real(1.3);
        let b = FockBasis::new(2, 2).unwrap();
        let j = build_slq2_bosonic(&b, &q).unwrap();
        let scalar = BTreeMap::from([(0, Operator::identity(b.space()))]);
        assert_eq!(check_q_tensor(&j, &j, &scalar, 0, &q, 1e-12).unwrap().max_residual(), 0.0);
        for n in 0..=3 {
            let (jd, jc, t) = dressed_doublet(n, &q, false);
            assert!(check_q_tensor(&jd, &jc, &t, 1, &q, 1e-10).unwrap().max_residual() < 1e-10);
        }
        let (jd, jc, t) = dressed_doublet(2, &q, true);
        assert!(check_q_tensor(&jd, &jc, &t, 1, &q, 1e-10).unwrap().max_residual() > 1e-3);
        let (jd, jc, mut t) = dressed_doublet(2, &q, false);
        t.remove(&-1);
        assert!(matches!(check_q_tensor(&jd, &jc, &t, 1, &q, 1e-10), Err(Error::MissingComponent { two_m: -1 })));
    }

    #[test]
    fn soq3_nonstandard_examples() {
        let q = real(1.3);
        for n in 1..=3 {
            let b = FockBasis::new(3, n).unwrap();
            let l = build_soq3_nonstandard(&b, &q).unwrap();
            let rep = l.check(&q, 1e-12).unwrap();
            assert!(rep.get("[L0,L+]-L+").unwrap().residual < 1e-12);
            assert_eq!(l.l_minus, l.l_plus.adjoint());
        }
        // q = 1: L+ = sqrt(2) (b1^+ b0 + b0^+ b-1)
        let b = FockBasis::new(3, 2).unwrap();
        let one = DeformationParameter::classical();
        let l = build_soq3_nonstandard(&b, &one).unwrap();
        let want = (&bilinear(&b, 0, 1, &one).unwrap() + &bilinear(&b, 1, 2, &one).unwrap()).scale_real(2f64.sqrt());
        assert!((&l.l_plus - &want).norm_inf() < 1e-15);
        let phase = DeformationParameter::phase(0.9).unwrap();
        assert!(build_soq3_nonstandard(&b, &phase).is_err());
    }

    #[test]
    fn relation_report_text() {
        let mut r = RelationReport::new(1e-9);
        r.push("a", 1e-12);
        r.push_exact("b", 0.0);
        r.push("c", 1.0);
        let txt = r.to_text();
        assert!(txt.starts_with("a 1.000000e-12 PASS\nb 0.000000e0 PASS\nc 1.000000e0 FAIL\n"));
        assert!(!r.passed());
    }
}
