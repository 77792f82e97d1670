//! The vibrational, rotational and gamma-unstable embedding chains of
//! gl_q(6) on six-mode q-boson sectors.
//!
//! Modes are 0-based in code: modes `0..5` carry the d-boson with
//! `m = 2, 1, 0, -1, -2` and mode `5` is the s-boson. Each chain keeps its
//! subalgebra realizations, the so_q(3) generators obtained by the
//! Curtright-Zachos map from an undeformed `l+`, the Cartan identities that
//! tie `L0` to the subalgebra Cartans, and the individual dressed terms of
//! every generator.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{
    build_glq_prefix, check_chevalley, check_serre, commutator, q_commutator, AlgebraRealization, ChevalleyTriple,
    RelationReport, So3Generators,
};
use crate::fock::{bilinear, q_power, sqrt_q_sum, FockBasis};
use crate::maps::{
    cz_block_factor, cz_deform, song_dress, sp4_cartan_dressing, sp4_deform, spin_blocks, ClassicalTriple, OneBody,
};
use crate::operator::Operator;
use crate::qnum::{q_number, validate_parameter, DeformationParameter};
use crate::{Error, Result};

/// Number of boson modes every chain lives on.
pub const CHAIN_MODES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    Vibrational,
    Rotational,
    GammaUnstable,
}

impl ChainKind {
    pub const ALL: [ChainKind; 3] = [Self::Vibrational, Self::Rotational, Self::GammaUnstable];

    pub fn name(self) -> &'static str {
        match self {
            Self::Vibrational => "vibrational",
            Self::Rotational => "rotational",
            Self::GammaUnstable => "gamma",
        }
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vibrational" => Ok(Self::Vibrational),
            "rotational" => Ok(Self::Rotational),
            "gamma" | "gamma_unstable" | "gamma-unstable" => Ok(Self::GammaUnstable),
            _ => Err(Error::InvalidParameter(format!("unknown chain {s:?}"))),
        }
    }
}

/// Dressing of the first sl_q(3) raising generator in the rotational chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RotationalVariant {
    /// Braced sum multiplied by `q^{-(N3 - N5)/2}`; satisfies sl_q(3).
    #[default]
    Corrected,
    /// Braced sum multiplied by `q^{-(N3 - N6)/2}`; fails `[h1, e1+] = 2 e1+`
    /// off the symmetric weight spaces and is kept for comparison.
    AsPrinted,
}

/// One dressed monomial of a chain generator.
#[derive(Clone, Debug)]
pub struct GeneratorTerm {
    pub generator: String,
    pub term: String,
    pub op: Operator,
}

/// `lhs = rhs` between diagonal operators, expected to hold exactly.
#[derive(Clone, Debug)]
pub struct CartanIdentity {
    pub id: String,
    pub lhs: Operator,
    pub rhs: Operator,
}

impl CartanIdentity {
    pub fn residual(&self) -> Result<f64> {
        Ok(self.lhs.try_sub(&self.rhs)?.norm_inf())
    }
}

#[derive(Clone, Debug)]
pub struct ChainRealization {
    pub kind: ChainKind,
    pub q: DeformationParameter,
    pub basis: FockBasis,
    pub subalgebras: Vec<AlgebraRealization>,
    /// Undeformed `l+, l-, 2 l0` fed to the Curtright-Zachos map.
    pub classical_l: ClassicalTriple,
    pub so3: So3Generators,
    pub cartan_identities: Vec<CartanIdentity>,
    pub terms: Vec<GeneratorTerm>,
    /// `(generator, formula)` pairs describing how each generator was built.
    pub provenance: Vec<(String, String)>,
}

impl ChainRealization {
    pub fn subalgebra(&self, name: &str) -> Option<&AlgebraRealization> {
        self.subalgebras.iter().find(|a| a.name == name)
    }

    /// Every raising generator with a `subalgebra/label` name, `L+` last.
    pub fn raising_generators(&self) -> Vec<(String, &Operator)> {
        let mut out: Vec<(String, &Operator)> = self
            .subalgebras
            .iter()
            .flat_map(|a| a.triples.iter().map(move |t| (format!("{}/{}", a.name, t.label), &t.e_plus)))
            .collect();
        out.push(("so_q(3)/L+".to_string(), &self.so3.l_plus));
        out
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

struct Builder<'a> {
    basis: &'a FockBasis,
    q: &'a DeformationParameter,
    terms: Vec<GeneratorTerm>,
}

impl<'a> Builder<'a> {
    fn n(&self, f: impl Fn(&[u32]) -> f64) -> Operator {
        self.basis.diagonal(|s| c(f(s)))
    }

    fn qp(&self, f: impl Fn(&[f64]) -> f64) -> Operator {
        q_power(self.basis, self.q, move |s| {
            let v: Vec<f64> = s.iter().map(|&x| x as f64).collect();
            f(&v)
        })
    }

    fn bl(&self, i: usize, j: usize) -> Result<Operator> {
        bilinear(self.basis, i, j, self.q)
    }

    fn sq(&self, k: usize) -> Result<Operator> {
        sqrt_q_sum(self.basis, k, self.q)
    }

    /// Songs-dressed bilinear `b~_i^+ b~_j`.
    fn cb(&self, i: usize, j: usize) -> Result<Operator> {
        song_dress(self.basis, &self.bl(i, j)?, i, j, self.q)
    }

    /// `song_a [e_a+, e_{a+1}+]_q song_{a+2} q^{N_{a+1}}`, equal to `b~_a^+ b~_{a+2}`.
    fn composite(&self, a: usize) -> Result<Operator> {
        let qc = q_commutator(&self.bl(a, a + 1)?, &self.bl(a + 1, a + 2)?, self.q.value())?;
        let dressed = song_dress(self.basis, &qc, a, a + 2, self.q)?;
        let mid = a + 1;
        dressed.try_mul(&self.qp(move |n| n[mid]))
    }

    /// Sums terms and records them under `generator`.
    fn sum(&mut self, generator: &str, parts: Vec<(String, Operator)>) -> Result<Operator> {
        let mut acc = Operator::zero(self.basis.space(), self.basis.space());
        for (term, op) in parts {
            acc = acc.try_add(&op)?;
            self.terms.push(GeneratorTerm { generator: generator.to_string(), term, op });
        }
        Ok(acc)
    }
}

fn check_basis(basis: &FockBasis, q: &DeformationParameter) -> Result<()> {
    if basis.n_modes() != CHAIN_MODES {
        return Err(Error::Domain(format!("chains live on {CHAIN_MODES} modes, got {}", basis.n_modes())));
    }
    // sqrt(q^N + q^-N) needs 2 cos(N tau) > 0 and the maps need [n] > 0
    validate_parameter(q, basis.total() + 1).into_result()
}

fn l_triple(
    b: &mut Builder,
    coefs: &[(f64, &[(usize, usize)])],
    composites: &[(f64, usize)],
    l0: [f64; 6],
) -> Result<ClassicalTriple> {
    let mut parts = Vec::new();
    let mut one_body = Vec::new();
    for &(x, pairs) in coefs {
        for &(i, j) in pairs {
            parts.push((format!("{x:.4}*b~{}+b~{}", i + 1, j + 1), b.cb(i, j)?.scale_real(x)));
            one_body.push((i, j, x));
        }
    }
    for &(x, a) in composites {
        parts.push((format!("{x:.4}*[e{}+,e{}+]_q", a + 1, a + 2), b.composite(a)?.scale_real(x)));
        one_body.push((a, a + 2, x));
    }
    let op = b.sum("l+", parts)?;
    let e = OneBody::from_terms(CHAIN_MODES, &one_body);
    let h = OneBody::from_terms(CHAIN_MODES, &(0..CHAIN_MODES).map(|k| (k, k, 2.0 * l0[k])).collect::<Vec<_>>());
    ClassicalTriple::with_operator("l", e, h, b.basis, op)
}

fn so3_from(classical: &ClassicalTriple, q: &DeformationParameter) -> Result<So3Generators> {
    let t = cz_deform(classical, q)?;
    Ok(So3Generators { l_plus: t.e_plus, l_minus: t.e_minus, l_zero: t.h.scale_real(0.5) })
}

fn identity(id: &str, lhs: Operator, rhs: Operator) -> CartanIdentity {
    CartanIdentity { id: id.to_string(), lhs, rhs }
}

fn sum_h(terms: &[(f64, &Operator)]) -> Result<Operator> {
    let mut acc = terms[0].1.scale_real(terms[0].0);
    for (x, h) in &terms[1..] {
        acc = acc.try_add(&h.scale_real(*x))?;
    }
    Ok(acc)
}

/// `gl_q(6) > gl_q(5) > so_q(5) > so_q(3)`.
///
/// so_q(5) on the d-boson modes (see [`crate::maps::soq5_vector_realization`]
/// for the formula), node 1 long; `l+ = 2(b~1+b~2 + b~4+b~5) + sqrt(6)(b~2+b~3 + b~3+b~4)`;
/// `L0 = 2N1 + N2 - N4 - 2N5`.
pub fn build_vibrational(basis: &FockBasis, q: &DeformationParameter) -> Result<ChainRealization> {
    check_basis(basis, q)?;
    let mut b = Builder { basis, q, terms: Vec::new() };
    let inv = c(1.0) / (q.value() + q.inverse().value());
    let e1 = b.sum(
        "E1",
        vec![
            (
                "sq(N1) b1+b2 sq(N2) q^-(N4-N5)/(q+1/q)".into(),
                b.sq(0)?.try_mul(&b.bl(0, 1)?)?.try_mul(&b.sq(1)?)?.try_mul(&b.qp(|n| -(n[3] - n[4])))?.scale(inv),
            ),
            (
                "sq(N4) b4+b5 sq(N5) q^(N1-N2)/(q+1/q)".into(),
                b.sq(3)?.try_mul(&b.bl(3, 4)?)?.try_mul(&b.sq(4)?)?.try_mul(&b.qp(|n| n[0] - n[1]))?.scale(inv),
            ),
        ],
    )?;
    let e2 = b.sum(
        "E2",
        vec![
            ("q^(N4-N3/2) sq(N2) b2+b3".into(), b.qp(|n| n[3] - n[2] / 2.0).try_mul(&b.sq(1)?)?.try_mul(&b.bl(1, 2)?)?),
            ("b3+b4 q^(N2-N3/2) sq(N4)".into(), b.bl(2, 3)?.try_mul(&b.qp(|n| n[1] - n[2] / 2.0))?.try_mul(&b.sq(3)?)?),
        ],
    )?;
    let h1 = b.n(|s| s[0] as f64 - s[1] as f64 + s[3] as f64 - s[4] as f64);
    let h2 = b.n(|s| 2.0 * (s[1] as f64 - s[3] as f64));
    let so5 = AlgebraRealization::new(
        "so_q(5)",
        vec![ChevalleyTriple::from_raising("E1", e1, h1.clone(), 2)?, ChevalleyTriple::from_raising("E2", e2, h2.clone(), 1)?],
        vec![],
        vec![vec![2, -1], vec![-2, 2]],
    )?;
    let gl5 = build_glq_prefix(basis, 5, q)?;
    let s6 = 6f64.sqrt();
    let l0 = [2.0, 1.0, 0.0, -1.0, -2.0, 0.0];
    let classical_l = l_triple(&mut b, &[(2.0, &[(0, 1), (3, 4)]), (s6, &[(1, 2), (2, 3)])], &[], l0)?;
    let so3 = so3_from(&classical_l, q)?;
    let cartan_identities = vec![identity("L0=2H1+3/2H2", so3.l_zero.clone(), sum_h(&[(2.0, &h1), (1.5, &h2)])?)];
    Ok(ChainRealization {
        kind: ChainKind::Vibrational,
        q: *q,
        basis: basis.clone(),
        subalgebras: vec![gl5, so5],
        classical_l,
        so3,
        cartan_identities,
        terms: b.terms,
        provenance: vec![
            ("gl_q(5)".into(), "e_i+ = b_i+ b_i+1 on modes 1..5, h0 = N1+..+N5".into()),
            ("so_q(5)".into(), "q-boson vector realization on the d-boson modes".into()),
            ("L+".into(), "Curtright-Zachos map of l+ = 2(b~1+b~2 + b~4+b~5) + sqrt6(b~2+b~3 + b~3+b~4)".into()),
        ],
    })
}

/// `gl_q(6) > sl_q(3) > so_q(3)` with the corrected sl_q(3) dressing.
pub fn build_rotational(basis: &FockBasis, q: &DeformationParameter) -> Result<ChainRealization> {
    build_rotational_variant(basis, q, RotationalVariant::Corrected)
}

/// sl_q(3):
///
/// `E1 = { q^{N4-N2/2} sq(N1) b1+b2 + b2+b4 q^{N1-N2/2} sq(N4) } q^{-(N3-N5)/2} + b3+b5 q^{N1-N4}`,
/// `E2 = { q^{N6-N5/2} sq(N4) b4+b5 + b5+b6 q^{N4-N5/2} sq(N6) } q^{(N2-N3)/2} + b2+b3 q^{-(N4-N6)}`,
/// `H1 = 2N1 - 2N4 + N3 - N5`, `H2 = N2 - N3 + 2N4 - 2N6`, where
/// `sq(N) = sqrt(q^N + q^-N)`. `l+` combines `b~1+b~2`, `b~2+b~4`, `b~3+b~5`,
/// `b~2+b~3`, `b~4+b~5`, `b~5+b~6` with coefficients `2, 2, sqrt2, sqrt2, 2, 2`,
/// the `b~2+b~4` and `b~3+b~5` terms built from q-commutators.
pub fn build_rotational_variant(
    basis: &FockBasis,
    q: &DeformationParameter,
    variant: RotationalVariant,
) -> Result<ChainRealization> {
    check_basis(basis, q)?;
    let mut b = Builder { basis, q, terms: Vec::new() };
    let tail = match variant {
        RotationalVariant::Corrected => 4,
        RotationalVariant::AsPrinted => 5,
    };
    let outer = b.qp(move |n| -(n[2] - n[tail]) / 2.0);
    let e1 = b.sum(
        "E1",
        vec![
            (
                "q^(N4-N2/2) sq(N1) b1+b2 q^-(N3-N5)/2".into(),
                b.qp(|n| n[3] - n[1] / 2.0).try_mul(&b.sq(0)?)?.try_mul(&b.bl(0, 1)?)?.try_mul(&outer)?,
            ),
            (
                "b2+b4 q^(N1-N2/2) sq(N4) q^-(N3-N5)/2".into(),
                b.bl(1, 3)?.try_mul(&b.qp(|n| n[0] - n[1] / 2.0))?.try_mul(&b.sq(3)?)?.try_mul(&outer)?,
            ),
            ("b3+b5 q^(N1-N4)".into(), b.bl(2, 4)?.try_mul(&b.qp(|n| n[0] - n[3]))?),
        ],
    )?;
    let outer2 = b.qp(|n| (n[1] - n[2]) / 2.0);
    let e2 = b.sum(
        "E2",
        vec![
            (
                "q^(N6-N5/2) sq(N4) b4+b5 q^(N2-N3)/2".into(),
                b.qp(|n| n[5] - n[4] / 2.0).try_mul(&b.sq(3)?)?.try_mul(&b.bl(3, 4)?)?.try_mul(&outer2)?,
            ),
            (
                "b5+b6 q^(N4-N5/2) sq(N6) q^(N2-N3)/2".into(),
                b.bl(4, 5)?.try_mul(&b.qp(|n| n[3] - n[4] / 2.0))?.try_mul(&b.sq(5)?)?.try_mul(&outer2)?,
            ),
            ("b2+b3 q^-(N4-N6)".into(), b.bl(1, 2)?.try_mul(&b.qp(|n| -(n[3] - n[5])))?),
        ],
    )?;
    let h1 = b.n(|s| 2.0 * s[0] as f64 - 2.0 * s[3] as f64 + s[2] as f64 - s[4] as f64);
    let h2 = b.n(|s| s[1] as f64 - s[2] as f64 + 2.0 * s[3] as f64 - 2.0 * s[5] as f64);
    let sl3 = AlgebraRealization::new(
        "sl_q(3)",
        vec![ChevalleyTriple::from_raising("E1", e1, h1.clone(), 1)?, ChevalleyTriple::from_raising("E2", e2, h2.clone(), 1)?],
        vec![],
        vec![vec![2, -1], vec![-1, 2]],
    )?;
    let gl6 = build_glq_prefix(basis, 6, q)?;
    let s2 = 2f64.sqrt();
    let l0 = [2.0, 1.0, 0.0, 0.0, -1.0, -2.0];
    let classical_l = l_triple(
        &mut b,
        &[(2.0, &[(0, 1), (3, 4), (4, 5)]), (s2, &[(1, 2)])],
        &[(2.0, 1), (s2, 2)],
        l0,
    )?;
    let so3 = so3_from(&classical_l, q)?;
    let cartan_identities = vec![identity("L0=H1+H2", so3.l_zero.clone(), sum_h(&[(1.0, &h1), (1.0, &h2)])?)];
    let sl3_note = match variant {
        RotationalVariant::Corrected => "three-term q-boson sums, first sum dressed by q^-(N3-N5)/2",
        RotationalVariant::AsPrinted => "three-term q-boson sums, first sum dressed by q^-(N3-N6)/2",
    };
    Ok(ChainRealization {
        kind: ChainKind::Rotational,
        q: *q,
        basis: basis.clone(),
        subalgebras: vec![gl6, sl3],
        classical_l,
        so3,
        cartan_identities,
        terms: b.terms,
        provenance: vec![
            ("gl_q(6)".into(), "e_i+ = b_i+ b_i+1, h0 = N1+..+N6".into()),
            ("sl_q(3)".into(), sl3_note.into()),
            ("L+".into(), "Curtright-Zachos map of l+ with coefficients 2, 2, sqrt2, sqrt2, 2, 2".into()),
        ],
    })
}

/// Normalization of the gamma-unstable `l+` relative to the coefficients
/// `sqrt(2)` and `sqrt(3/2)`; with it `[l+, l-] = 2 l0`.
pub const GAMMA_L_SCALE: f64 = std::f64::consts::SQRT_2;

/// `gl_q(6) > so_q(6) > so_q(5) > so_q(3)`.
///
/// so_q(6): `E1 = b2+b4 q^{(N3-N5)/2} + b3+b5 q^{-(N2-N4)/2}`,
/// `E2 = b1+b2 q^{(N5-N6)/2} + b5+b6 q^{-(N1-N2)/2}`,
/// `E3 = b2+b3 q^{(N4-N5)/2} + b4+b5 q^{-(N2-N3)/2}` with node 2 central.
/// The embedded so_q(5) is [`sp4_deform`] of
/// `(b~1+b~2 + b~5+b~6, b~2+b~4 + b~3+b~5 + b~2+b~3 + b~4+b~5)` with Cartans
/// `H^1 = N1 + N5 - N2 - N6`, `H^2 = 2(N2 - N5)`.
pub fn build_gamma(basis: &FockBasis, q: &DeformationParameter) -> Result<ChainRealization> {
    check_basis(basis, q)?;
    let mut b = Builder { basis, q, terms: Vec::new() };
    let mut so6 = Vec::new();
    let specs: [(&str, [usize; 4], [usize; 4]); 3] = [
        // (label, [i, j, a, b] for b_i+ b_j q^{(Na - Nb)/2}, second term likewise with a minus sign)
        ("E1", [1, 3, 2, 4], [2, 4, 1, 3]),
        ("E2", [0, 1, 4, 5], [4, 5, 0, 1]),
        ("E3", [1, 2, 3, 4], [3, 4, 1, 2]),
    ];
    for (label, [i, j, a1, b1], [k, l, a2, b2]) in specs {
        let e = b.sum(
            label,
            vec![
                (
                    format!("b{}+b{} q^(N{}-N{})/2", i + 1, j + 1, a1 + 1, b1 + 1),
                    b.bl(i, j)?.try_mul(&b.qp(move |n| (n[a1] - n[b1]) / 2.0))?,
                ),
                (
                    format!("b{}+b{} q^-(N{}-N{})/2", k + 1, l + 1, a2 + 1, b2 + 1),
                    b.bl(k, l)?.try_mul(&b.qp(move |n| -(n[a2] - n[b2]) / 2.0))?,
                ),
            ],
        )?;
        so6.push(e);
    }
    let hs = [
        b.n(|s| s[1] as f64 - s[3] as f64 + s[2] as f64 - s[4] as f64),
        b.n(|s| s[0] as f64 - s[1] as f64 + s[4] as f64 - s[5] as f64),
        b.n(|s| s[1] as f64 - s[2] as f64 + s[3] as f64 - s[4] as f64),
    ];
    let triples = so6
        .into_iter()
        .zip(hs.iter())
        .enumerate()
        .map(|(k, (e, h))| ChevalleyTriple::from_raising(format!("E{}", k + 1), e, h.clone(), 1))
        .collect::<Result<Vec<_>>>()?;
    let so6 = AlgebraRealization::new("so_q(6)", triples, vec![], vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]])?;

    let e1_cl = b.sum(
        "E1^",
        vec![("b~1+b~2".into(), b.cb(0, 1)?), ("b~5+b~6".into(), b.cb(4, 5)?)],
    )?;
    let e2_cl = b.sum(
        "E2^",
        vec![
            ("[e2+,e3+]_q q^N3".into(), b.composite(1)?),
            ("[e3+,e4+]_q q^N4".into(), b.composite(2)?),
            ("b~2+b~3".into(), b.cb(1, 2)?),
            ("b~4+b~5".into(), b.cb(3, 4)?),
        ],
    )?;
    let hat1 = OneBody::from_terms(CHAIN_MODES, &[(0, 0, 1.0), (4, 4, 1.0), (1, 1, -1.0), (5, 5, -1.0)]);
    let hat2 = OneBody::from_terms(CHAIN_MODES, &[(1, 1, 2.0), (4, 4, -2.0)]);
    let pair = [
        ClassicalTriple::with_operator("E1^", OneBody::from_terms(CHAIN_MODES, &[(0, 1, 1.0), (4, 5, 1.0)]), hat1, basis, e1_cl)?,
        ClassicalTriple::with_operator(
            "E2^",
            OneBody::from_terms(CHAIN_MODES, &[(1, 3, 1.0), (2, 4, 1.0), (1, 2, 1.0), (3, 4, 1.0)]),
            hat2,
            basis,
            e2_cl,
        )?,
    ];
    let so5_pair = sp4_deform(&pair, basis, q)?;
    let so5 = AlgebraRealization::new("so_q(5)", so5_pair.to_vec(), vec![], vec![vec![2, -1], vec![-2, 2]])?;

    let s = GAMMA_L_SCALE;
    let l0 = [2.0, 1.0, 0.0, 0.0, -1.0, -2.0];
    let classical_l = l_triple(
        &mut b,
        &[(s * 2f64.sqrt(), &[(0, 1), (4, 5)]), (s * 1.5f64.sqrt(), &[(1, 2), (3, 4)])],
        &[(s * 1.5f64.sqrt(), 1), (s * 1.5f64.sqrt(), 2)],
        l0,
    )?;
    let so3 = so3_from(&classical_l, q)?;
    let [h1, h2, h3] = &hs;
    let cartan_identities = vec![
        identity("L0=3/2(H1+H3)+2H2", so3.l_zero.clone(), sum_h(&[(1.5, h1), (1.5, h3), (2.0, h2)])?),
        identity("H^1=H2", pair[0].h_op.clone(), h2.clone()),
        identity("H^2=H1+H3", pair[1].h_op.clone(), sum_h(&[(1.0, h1), (1.0, h3)])?),
    ];
    Ok(ChainRealization {
        kind: ChainKind::GammaUnstable,
        q: *q,
        basis: basis.clone(),
        subalgebras: vec![build_glq_prefix(basis, 6, q)?, so6, so5],
        classical_l,
        so3,
        cartan_identities,
        terms: b.terms,
        provenance: vec![
            ("gl_q(6)".into(), "e_i+ = b_i+ b_i+1, h0 = N1+..+N6".into()),
            ("so_q(6)".into(), "two-term q-boson sums with half-power dressings".into()),
            ("so_q(5)".into(), "so(5) -> so_q(5) map in the vector frame of the classical pair".into()),
            ("L+".into(), "Curtright-Zachos map of sqrt2 x (sqrt2 [..] + sqrt(3/2) [..])".into()),
        ],
    })
}

pub fn build_chain(kind: ChainKind, basis: &FockBasis, q: &DeformationParameter) -> Result<ChainRealization> {
    match kind {
        ChainKind::Vibrational => build_vibrational(basis, q),
        ChainKind::Rotational => build_rotational(basis, q),
        ChainKind::GammaUnstable => build_gamma(basis, q),
    }
}

/// The closed-form Cartan dressing applied to the gamma-unstable classical
/// so(5) pair, for comparison with [`sp4_deform`].
pub fn gamma_so5_cartan_dressing(basis: &FockBasis, q: &DeformationParameter) -> Result<AlgebraRealization> {
    let cl = build_gamma(basis, &DeformationParameter::classical())?;
    let so5 = cl.subalgebra("so_q(5)").expect("gamma chain has so_q(5)");
    let [t1, t2] = [&so5.triples[0], &so5.triples[1]];
    let (e1, e2) = sp4_cartan_dressing(&t1.e_plus, &t2.e_plus, &t1.h, &t2.h, q)?;
    AlgebraRealization::new(
        "so_q(5) closed-form dressing",
        vec![
            ChevalleyTriple::from_raising("E1", e1, t1.h.clone(), 2)?,
            ChevalleyTriple::from_raising("E2", e2, t2.h.clone(), 1)?,
        ],
        vec![],
        so5.cartan_matrix.clone(),
    )
}

/// Residual of `[H, T] = w T` for every registered term against every
/// diagonal Cartan element of the chain, `w` read off the largest entry of
/// `T` and required to be an integer.
pub fn check_term_weights(chain: &ChainRealization, tol: f64) -> Result<RelationReport> {
    let mut cartans: Vec<(String, &Operator)> = Vec::new();
    for a in &chain.subalgebras {
        for t in &a.triples {
            cartans.push((format!("{}/{}", a.name, t.label), &t.h));
        }
    }
    cartans.push(("L0".into(), &chain.so3.l_zero));
    let mut report = RelationReport::new(tol);
    for term in &chain.terms {
        let Some((r, col, z)) = term.op.iter().max_by(|a, b| a.2.norm().total_cmp(&b.2.norm())) else {
            continue;
        };
        let mut worst = 0f64;
        for (_, h) in &cartans {
            let comm = commutator(h, &term.op)?;
            let w = (comm.get(r, col) / z).re;
            let off_integer = (w - w.round()).abs();
            worst = worst.max(comm.try_sub(&term.op.scale_real(w.round()))?.norm_inf()).max(off_integer);
        }
        report.push(format!("weight/{}/{}", term.generator, term.term), worst);
    }
    Ok(report)
}

/// Residual of `L- L+ P = [j-m]_q [j+m+1]_q P` on every `(j, m)` block of the
/// undeformed `l` decomposition, `m < j`.
pub fn check_cz_blocks(chain: &ChainRealization, tol: f64) -> Result<RelationReport> {
    let mut report = RelationReport::new(tol);
    let ll = chain.so3.l_minus.try_mul(&chain.so3.l_plus)?;
    for blk in spin_blocks(&chain.classical_l)? {
        if blk.two_m >= blk.two_j as i32 {
            continue;
        }
        let (j, m) = (blk.two_j as f64 / 2.0, blk.two_m as f64 / 2.0);
        let target = q_number(j - m, &chain.q) * q_number(j + m + 1.0, &chain.q);
        let r = ll.try_mul(&blk.projector)?.try_sub(&blk.projector.scale_real(target))?;
        report.push(format!("block(2j={},2m={})", blk.two_j, blk.two_m), r.norm_inf());
    }
    Ok(report)
}

/// Chevalley and Serre relations of every subalgebra, the so_q(3) relations
/// and blocks, exact Cartan identities, adjointness for real `q`, and term
/// weight consistency.
pub fn check_chain(chain: &ChainRealization, tol: f64) -> Result<RelationReport> {
    let q = &chain.q;
    let mut report = RelationReport::new(tol);
    for a in &chain.subalgebras {
        report.extend_prefixed(&a.name, check_chevalley(a, q, tol)?);
        report.extend_prefixed(&a.name, check_serre(a, q, tol)?);
    }
    report.extend_prefixed("so_q(3)", chain.so3.check(q, tol)?);
    report.extend_prefixed("so_q(3)", check_cz_blocks(chain, tol)?);
    for id in &chain.cartan_identities {
        report.push_exact(format!("cartan/{}", id.id), id.residual()?);
    }
    if q.is_real() {
        for a in &chain.subalgebras {
            for t in &a.triples {
                let r = t.e_minus.try_sub(&t.e_plus.adjoint())?.norm_inf();
                report.push_exact(format!("adjoint/{}/{}", a.name, t.label), r);
            }
        }
        let r = chain.so3.l_minus.try_sub(&chain.so3.l_plus.adjoint())?.norm_inf();
        report.push_exact("adjoint/so_q(3)/L", r);
    }
    report.extend_prefixed("terms", check_term_weights(chain, tol)?);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub generator: String,
    pub eps: f64,
    pub distance: f64,
}

/// Distances between generators at `q = 1 + eps` and at `q = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitTable {
    pub chain: ChainKind,
    pub rows: Vec<LimitRow>,
}

/// Label of the per-`eps` maximum over all generators.
pub const AGGREGATE: &str = "max";

impl LimitTable {
    pub fn eps(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.rows.iter().filter(|r| r.generator == AGGREGATE).map(|r| r.eps).collect();
        e.dedup();
        e
    }

    /// Distances of `generator` in the order of `eps`.
    pub fn series(&self, generator: &str) -> Vec<f64> {
        self.rows.iter().filter(|r| r.generator == generator).map(|r| r.distance).collect()
    }

    /// Ratios of consecutive aggregate distances.
    pub fn aggregate_ratios(&self) -> Vec<f64> {
        self.series(AGGREGATE).windows(2).map(|w| w[0] / w[1]).collect()
    }

    pub fn aggregate_monotone(&self) -> bool {
        self.series(AGGREGATE).windows(2).all(|w| w[1] < w[0])
    }
}

/// For each `eps`, the infinity-norm distance of every raising generator at
/// `q = 1 + eps` from its `q = 1` value, followed by their maximum.
pub fn classical_limit_check(kind: ChainKind, basis: &FockBasis, eps_list: &[f64]) -> Result<LimitTable> {
    if eps_list.iter().any(|&e| !(e.is_finite() && e >= 0.0)) {
        return Err(Error::InvalidParameter("eps values must be nonnegative".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("eps values must be strictly decreasing".into()));
    }
    let reference = build_chain(kind, basis, &DeformationParameter::classical())?;
    let ref_gens = reference.raising_generators();
    let mut rows = Vec::new();
    for &eps in eps_list {
        let chain = build_chain(kind, basis, &DeformationParameter::real(1.0 + eps)?)?;
        let mut worst = 0f64;
        for ((name, op), (_, op0)) in chain.raising_generators().into_iter().zip(&ref_gens) {
            let distance = op.try_sub(op0)?.norm_inf();
            worst = worst.max(distance);
            rows.push(LimitRow { generator: name, eps, distance });
        }
        rows.push(LimitRow { generator: AGGREGATE.into(), eps, distance: worst });
    }
    Ok(LimitTable { chain: kind, rows })
}

/// `sqrt([j-m]_q [j+m+1]_q)`, the `(j, m) -> (j, m+1)` ladder element of the
/// deformed so_q(3).
pub fn ladder_element(two_j: u32, two_m: i32, q: &DeformationParameter) -> f64 {
    let (j, m) = (two_j as f64 / 2.0, two_m as f64 / 2.0);
    cz_block_factor(two_j, two_m, q) * ((j - m) * (j + m + 1.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::soq5_vector_realization;

    fn real(q: f64) -> DeformationParameter {
        DeformationParameter::real(q).unwrap()
    }

    fn basis(n: u32) -> FockBasis {
        FockBasis::new(6, n).unwrap()
    }

    #[test]
    fn chain_names_round_trip() {
        for k in ChainKind::ALL {
            assert_eq!(k.name().parse::<ChainKind>().unwrap(), k);
        }
        assert!("u5".parse::<ChainKind>().is_err());
    }

    #[test]
    fn chains_pass_at_q13() {
        for kind in ChainKind::ALL {
            for n in 1..=2 {
                let ch = build_chain(kind, &basis(n), &real(1.3)).unwrap();
                let rep = check_chain(&ch, 1e-9).unwrap();
                assert!(rep.passed(), "{kind} N={n}\n{}", rep.to_text());
            }
        }
    }

    #[test]
    fn chains_are_classical_at_q1() {
        for kind in ChainKind::ALL {
            let ch = build_chain(kind, &basis(2), &DeformationParameter::classical()).unwrap();
            let rep = check_chain(&ch, 1e-12).unwrap();
            assert!(rep.passed(), "{kind}\n{}", rep.to_text());
        }
    }

    #[test]
    fn vibrational_terms_match_maps_formula() {
        let b = basis(2);
        let q = real(0.7);
        let ch = build_vibrational(&b, &q).unwrap();
        let direct = soq5_vector_realization(&b, [0, 1, 2, 3, 4], &q).unwrap();
        let so5 = ch.subalgebra("so_q(5)").unwrap();
        for (x, y) in so5.triples.iter().zip(&direct) {
            assert!((&x.e_plus - &y.e_plus).norm_inf() < 1e-14);
        }
    }

    #[test]
    fn vibrational_l_ladder_at_q1() {
        // one d-boson: (2, sqrt6, sqrt6, 2) along m = -2 -> 2
        let b = basis(1);
        let ch = build_vibrational(&b, &DeformationParameter::classical()).unwrap();
        let idx = |k: usize| {
            let mut s = [0u32; 6];
            s[k] = 1;
            b.index_of(&s).unwrap()
        };
        let expect = [2.0, 6f64.sqrt(), 6f64.sqrt(), 2.0];
        for (k, want) in expect.iter().enumerate() {
            assert!((ch.so3.l_plus.get(idx(k), idx(k + 1)).re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn rotational_n1_decomposes_into_l0_and_l2() {
        let b = basis(1);
        let ch = build_rotational(&b, &DeformationParameter::classical()).unwrap();
        let mut js: Vec<u32> = spin_blocks(&ch.classical_l).unwrap().iter().map(|bk| bk.two_j).collect();
        js.sort_unstable();
        js.dedup();
        assert_eq!(js, vec![0, 4]);
    }

    #[test]
    fn printed_rotational_dressing_fails() {
        let ch = build_rotational_variant(&basis(2), &real(1.3), RotationalVariant::AsPrinted).unwrap();
        let rep = check_chevalley(ch.subalgebra("sl_q(3)").unwrap(), &real(1.3), 1e-9).unwrap();
        assert!(rep.max_residual() > 0.1);
        // weight of the first sl_q(3) generator stays 2 under H1
        let good = build_rotational(&basis(2), &real(1.3)).unwrap();
        let sl3 = good.subalgebra("sl_q(3)").unwrap();
        let r = commutator(&sl3.triples[0].h, &sl3.triples[0].e_plus).unwrap();
        assert!((&r - &sl3.triples[0].e_plus.scale_real(2.0)).norm_inf() < 1e-12);
    }

    #[test]
    fn gamma_cartan_identities_are_exact() {
        let ch = build_gamma(&basis(3), &real(0.7)).unwrap();
        for id in &ch.cartan_identities {
            assert_eq!(id.residual().unwrap(), 0.0, "{}", id.id);
        }
    }

    #[test]
    fn gamma_hat_h2_is_h1_plus_h3() {
        // H1 - H3 = 2(N3 - N4) differs from H^2 = 2(N2 - N5) by 2 on one boson
        let ch = build_gamma(&basis(1), &real(1.3)).unwrap();
        let so6 = &ch.subalgebra("so_q(6)").unwrap().triples;
        let minus = sum_h(&[(1.0, &so6[0].h), (-1.0, &so6[2].h)]).unwrap();
        let hat2 = &ch.subalgebra("so_q(5)").unwrap().triples[1].h;
        assert_eq!(hat2.try_sub(&minus).unwrap().norm_inf(), 2.0);
    }

    #[test]
    fn gamma_l_unscaled_does_not_close() {
        let b = basis(1);
        let ch = build_gamma(&b, &DeformationParameter::classical()).unwrap();
        let l = &ch.classical_l.e_plus.scale_real(1.0 / GAMMA_L_SCALE);
        let comm = commutator(l, &l.transpose()).unwrap();
        let two_l0 = ch.so3.l_zero.scale_real(2.0);
        assert!((&comm - &two_l0).norm_inf() > 0.5);
    }

    #[test]
    fn closed_form_dressing_is_reported_failing() {
        let q = real(1.3);
        let r = gamma_so5_cartan_dressing(&basis(1), &q).unwrap();
        assert!(check_chevalley(&r, &q, 1e-9).unwrap().max_residual() > 0.1);
    }

    #[test]
    fn ladder_elements() {
        let q = real(2.0);
        assert!((ladder_element(2, 0, &q) - 2.5f64.sqrt()).abs() < 1e-14);
        assert_eq!(ladder_element(2, 2, &q), 0.0);
    }

    #[test]
    fn limit_table_shape() {
        let t = classical_limit_check(ChainKind::Vibrational, &basis(1), &[1e-2, 1e-3]).unwrap();
        assert_eq!(t.eps(), vec![1e-2, 1e-3]);
        assert!(t.aggregate_monotone());
        let zero = classical_limit_check(ChainKind::Vibrational, &basis(1), &[0.0]).unwrap();
        assert!(zero.rows.iter().all(|r| r.distance == 0.0));
        assert!(classical_limit_check(ChainKind::Vibrational, &basis(1), &[1e-3, 1e-2]).is_err());
    }

    #[test]
    fn rejects_wrong_mode_count() {
        assert!(build_vibrational(&FockBasis::new(5, 1).unwrap(), &real(1.3)).is_err());
    }
}
