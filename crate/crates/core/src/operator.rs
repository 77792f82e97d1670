//! Sparse complex matrices between labelled spaces.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Identity of the space an operator acts on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// Fixed-total-number Fock sector.
    Sector { modes: usize, total: u32, dim: usize },
    /// Tensor product of two spaces.
    Product(Box<Space>, Box<Space>),
}

impl Space {
    pub fn dim(&self) -> usize {
        match self {
            Space::Sector { dim, .. } => *dim,
            Space::Product(a, b) => a.dim() * b.dim(),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Sector { modes, total, dim } => write!(f, "sector(m={modes}, N={total}, dim={dim})"),
            Space::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

/// Sparse operator `domain -> codomain`, stored row-major with sorted
/// column indices. Exact zeros are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    domain: Space,
    codomain: Space,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl Operator {
    pub fn zero(domain: Space, codomain: Space) -> Self {
        let rows = vec![Vec::new(); codomain.dim()];
        Self { domain, codomain, rows }
    }

    pub fn identity(space: Space) -> Self {
        Self::diagonal(space.clone(), vec![Complex64::new(1.0, 0.0); space.dim()])
    }

    pub fn diagonal(space: Space, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), space.dim(), "diagonal length mismatch");
        let rows = entries
            .into_iter()
            .enumerate()
            .map(|(i, z)| if z == Complex64::new(0.0, 0.0) { Vec::new() } else { vec![(i, z)] })
            .collect();
        Self { domain: space.clone(), codomain: space, rows }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(domain: Space, codomain: Space, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); codomain.dim()];
        for (r, c, z) in triplets {
            assert!(r < codomain.dim() && c < domain.dim(), "triplet out of range");
            rows[r].push((c, z));
        }
        for row in &mut rows {
            compact(row);
        }
        Self { domain, codomain, rows }
    }

    pub fn from_dense(domain: Space, codomain: Space, m: &DMatrix<Complex64>) -> Self {
        assert_eq!((m.nrows(), m.ncols()), (codomain.dim(), domain.dim()));
        let rows = (0..m.nrows())
            .map(|r| {
                (0..m.ncols())
                    .filter_map(|c| {
                        let z = m[(r, c)];
                        (z != Complex64::new(0.0, 0.0)).then_some((c, z))
                    })
                    .collect()
            })
            .collect();
        Self { domain, codomain, rows }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.codomain.dim(), self.domain.dim());
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, z) in row {
                m[(r, c)] = z;
            }
        }
        m
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.domain.dim()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_square(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.rows[r]
            .binary_search_by_key(&c, |&(k, _)| k)
            .map(|i| self.rows[r][i].1)
            .unwrap_or_default()
    }

    pub fn row(&self, r: usize) -> &[(usize, Complex64)] {
        &self.rows[r]
    }

    /// All stored entries as `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, z)| (r, c, z)))
    }

    /// Drops entries with magnitude at or below `tol`.
    pub fn pruned(mut self, tol: f64) -> Self {
        for row in &mut self.rows {
            row.retain(|(_, z)| z.norm() > tol);
        }
        self
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for (_, z) in row.iter_mut() {
                *z *= s;
            }
            row.retain(|(_, z)| *z != Complex64::new(0.0, 0.0));
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let triplets = self.iter().map(|(r, c, z)| (c, r, z.conj()));
        Self::from_triplets(self.codomain.clone(), self.domain.clone(), triplets)
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        let triplets = self.iter().map(|(r, c, z)| (c, r, z));
        Self::from_triplets(self.codomain.clone(), self.domain.clone(), triplets)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge(a, b, Complex64::new(1.0, 0.0)))
            .collect();
        Ok(Self { domain: self.domain.clone(), codomain: self.codomain.clone(), rows })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge(a, b, Complex64::new(-1.0, 0.0)))
            .collect();
        Ok(Self { domain: self.domain.clone(), codomain: self.codomain.clone(), rows })
    }

    /// Composition `self * other` (apply `other` first).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.domain != other.codomain {
            return Err(Error::SpaceMismatch { left: self.domain.clone(), right: other.codomain.clone() });
        }
        let ncols = other.domain.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); ncols];
        let mut touched = vec![false; ncols];
        let mut cols = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, a) in row {
                    for &(c, b) in &other.rows[k] {
                        if !touched[c] {
                            touched[c] = true;
                            cols.push(c);
                        }
                        acc[c] += a * b;
                    }
                }
                cols.sort_unstable();
                let out = cols
                    .iter()
                    .filter_map(|&c| {
                        let z = acc[c];
                        acc[c] = Complex64::new(0.0, 0.0);
                        touched[c] = false;
                        (z != Complex64::new(0.0, 0.0)).then_some((c, z))
                    })
                    .collect();
                cols.clear();
                out
            })
            .collect();
        Ok(Self { domain: other.domain.clone(), codomain: self.codomain.clone(), rows })
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.domain.dim());
        self.rows.iter().map(|row| row.iter().map(|&(c, z)| z * v[c]).sum()).collect()
    }

    /// Infinity norm: maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(_, z)| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, _, z)| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && self.iter().all(|(r, c, _)| r == c)
    }

    /// Diagonal entries of a square operator.
    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.nrows()).map(|i| self.get(i, i)).collect()
    }

    /// Applies `f` entrywise to the diagonal of a diagonal operator.
    pub fn map_diagonal(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        if !self.is_diagonal() {
            return Err(Error::Domain("functional calculus needs a diagonal operator".into()));
        }
        let entries = self.diagonal_entries().into_iter().map(f).collect();
        Ok(Self::diagonal(self.domain.clone(), entries))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let domain = Space::Product(Box::new(self.domain.clone()), Box::new(other.domain.clone()));
        let codomain = Space::Product(Box::new(self.codomain.clone()), Box::new(other.codomain.clone()));
        let (bd, bc) = (other.domain.dim(), other.codomain.dim());
        let triplets: Vec<_> = self
            .iter()
            .flat_map(|(r1, c1, a)| other.iter().map(move |(r2, c2, b)| (r1 * bc + r2, c1 * bd + c2, a * b)))
            .collect();
        Self::from_triplets(domain, codomain, triplets)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::SpaceMismatch { left: self.domain.clone(), right: other.domain.clone() });
        }
        if self.codomain != other.codomain {
            return Err(Error::SpaceMismatch { left: self.codomain.clone(), right: other.codomain.clone() });
        }
        Ok(())
    }
}

fn compact(row: &mut Vec<(usize, Complex64)>) {
    row.sort_by_key(|&(c, _)| c);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
    for &(c, z) in row.iter() {
        match out.last_mut() {
            Some((lc, lz)) if *lc == c => *lz += z,
            _ => out.push((c, z)),
        }
    }
    out.retain(|(_, z)| *z != Complex64::new(0.0, 0.0));
    *row = out;
}

fn merge(a: &[(usize, Complex64)], b: &[(usize, Complex64)], sb: Complex64) -> Vec<(usize, Complex64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (c, z) = match (a.get(i), b.get(j)) {
            (Some(&(ca, za)), Some(&(cb, zb))) if ca == cb => {
                i += 1;
                j += 1;
                (ca, za + sb * zb)
            }
            (Some(&(ca, za)), Some(&(cb, _))) if ca < cb => {
                i += 1;
                (ca, za)
            }
            (Some(&(ca, za)), None) => {
                i += 1;
                (ca, za)
            }
            (_, Some(&(cb, zb))) => {
                j += 1;
                (cb, sb * zb)
            }
            (None, None) => unreachable!(),
        };
        if z != Complex64::new(0.0, 0.0) {
            out.push((c, z));
        }
    }
    out
}

// Operator overloads panic on space mismatch, like dense matrix libraries do
// on shape mismatch. Use the `try_*` methods where mismatch is recoverable.

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator addition")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator subtraction")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("operator composition")
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale_real(rhs)
    }
}

impl Mul<Complex64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: Complex64) -> Operator {
        self.scale(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}
