//! Homogeneous multivectors on `Λ^p R^m` for `3 <= m <= 6`.
//!
//! A basis blade `e_{i1} ∧ … ∧ e_{ip}` (with `i1 < … < ip`) is identified with
//! the bitmask that has bits `i1, …, ip` set; coefficients are stored densely
//! in a `[f64; 64]` indexed by that mask. Signs coming from reordering factors
//! are obtained by counting transpositions.
//!
//! Conventions (all sign factors elsewhere in the crate inherit from these):
//! * `⋆1 = e1 ∧ … ∧ em` for the standard ordered basis;
//! * `β ∧ ⋆α = ⟨β, α⟩ ⋆1`;
//! * contraction is the adjoint of the wedge: `⟨α ⌐ β, γ⟩ = ⟨α, β ∧ γ⟩`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 3;
pub const MAX_DIM: usize = 6;
const SLOTS: usize = 1 << MAX_DIM;

/// Bitmasks of all grade-`p` blades in dimension `m`, in increasing mask order.
pub fn blades(m: usize, p: usize) -> &'static [u8] {
    static TABLE: OnceLock<Vec<Vec<Vec<u8>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|m| {
                (0..=m)
                    .map(|p| {
                        (0u32..(1u32 << m))
                            .filter(|mask| mask.count_ones() as usize == p)
                            .map(|mask| mask as u8)
                            .collect()
                    })
                    .collect()
            })
            .collect()
    });
    &table[m][p]
}

/// Sign of `e_A ∧ e_B` relative to the sorted blade `e_{A ∪ B}`; zero if the
/// index sets overlap.
#[inline]
pub fn wedge_sign(a: u8, b: u8) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_dim(m: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&m) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(m))
    }
}

/// An element of `Λ^p R^m`.
#[derive(Clone, Copy, PartialEq)]
pub struct MultiVector {
    dim: usize,
    grade: usize,
    coeffs: [f64; SLOTS],
}

impl MultiVector {
    pub fn zero(dim: usize, grade: usize) -> Result<Self> {
        check_dim(dim)?;
        if grade > dim {
            return Err(Error::GradeOverflow(grade, dim));
        }
        Ok(Self::zero_unchecked(dim, grade))
    }

    pub(crate) fn zero_unchecked(dim: usize, grade: usize) -> Self {
        Self {
            dim,
            grade,
            coeffs: [0.0; SLOTS],
        }
    }

    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        let mut s = Self::zero(dim, 0)?;
        s.coeffs[0] = value;
        Ok(s)
    }

    /// The volume form `⋆1 = e1 ∧ … ∧ em`.
    pub fn volume(dim: usize) -> Result<Self> {
        let mut v = Self::zero(dim, dim)?;
        v.coeffs[(1usize << dim) - 1] = 1.0;
        Ok(v)
    }

    /// A 1-vector with the given Cartesian components.
    pub fn vector(components: &[f64]) -> Result<Self> {
        let mut v = Self::zero(components.len(), 1)?;
        for (i, &c) in components.iter().enumerate() {
            v.coeffs[1 << i] = c;
        }
        Ok(v)
    }

    /// Basis vector `e_{index}` (0-based).
    pub fn basis_vector(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::GradeOverflow(index + 1, dim));
        }
        let mut v = Self::zero(dim, 1)?;
        v.coeffs[1 << index] = 1.0;
        Ok(v)
    }

    /// `e_{i1} ∧ … ∧ e_{ip}` for 0-based indices in any order; repeated
    /// indices give zero.
    pub fn blade(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut out = Self::scalar(dim, 1.0)?;
        for &i in indices {
            out = out.wedge(&Self::basis_vector(dim, i)?)?;
        }
        Ok(out)
    }

    /// Builds a grade-`p` element from `(mask, coefficient)` pairs.
    pub fn from_blades<I>(dim: usize, grade: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u8, f64)>,
    {
        let mut out = Self::zero(dim, grade)?;
        for (mask, c) in terms {
            if mask as usize >= (1 << dim) || mask.count_ones() as usize != grade {
                return Err(Error::GradeMismatch(mask.count_ones() as usize, grade));
            }
            out.coeffs[mask as usize] += c;
        }
        Ok(out)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn grade(&self) -> usize {
        self.grade
    }

    #[inline]
    pub fn coeff(&self, mask: u8) -> f64 {
        self.coeffs[mask as usize]
    }

    #[inline]
    pub fn set_coeff(&mut self, mask: u8, value: f64) {
        debug_assert_eq!(mask.count_ones() as usize, self.grade);
        self.coeffs[mask as usize] = value;
    }

    /// `(mask, coefficient)` over every blade of this grade, zeros included.
    pub fn terms(&self) -> impl Iterator<Item = (u8, f64)> + '_ {
        blades(self.dim, self.grade)
            .iter()
            .map(move |&mask| (mask, self.coeffs[mask as usize]))
    }

    /// Cartesian components of a 1-vector.
    pub fn components(&self) -> Vec<f64> {
        debug_assert_eq!(self.grade, 1);
        (0..self.dim).map(|i| self.coeffs[1 << i]).collect()
    }

    pub fn scalar_part(&self) -> f64 {
        if self.grade == 0 {
            self.coeffs[0]
        } else {
            0.0
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.terms().map(|(_, c)| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms().fold(0.0, |acc, (_, c)| acc.max(c.abs()))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.grade != other.grade {
            return Err(Error::GradeMismatch(self.grade, other.grade));
        }
        Ok(())
    }

    /// Induced inner product on `Λ^p R^m` (basis blades orthonormal).
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(blades(self.dim, self.grade)
            .iter()
            .map(|&b| self.coeffs[b as usize] * other.coeffs[b as usize])
            .sum())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let grade = self.grade + other.grade;
        if grade > self.dim {
            return Err(Error::GradeOverflow(grade, self.dim));
        }
        let mut out = Self::zero_unchecked(self.dim, grade);
        for &a in blades(self.dim, self.grade) {
            let ca = self.coeffs[a as usize];
            if ca == 0.0 {
                continue;
            }
            for &b in blades(self.dim, other.grade) {
                if a & b != 0 {
                    continue;
                }
                let cb = other.coeffs[b as usize];
                if cb != 0.0 {
                    out.coeffs[(a | b) as usize] += wedge_sign(a, b) * ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// Hodge star, `Λ^p → Λ^{m-p}`.
    pub fn hodge(&self) -> Self {
        let full = ((1usize << self.dim) - 1) as u8;
        let mut out = Self::zero_unchecked(self.dim, self.dim - self.grade);
        for &a in blades(self.dim, self.grade) {
            let c = self.coeffs[a as usize];
            if c != 0.0 {
                let comp = full & !a;
                out.coeffs[comp as usize] = wedge_sign(a, comp) * c;
            }
        }
        out
    }

    /// Contraction `self ⌐ other` of a p-vector by a q-vector, `q <= p`.
    pub fn contract(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if other.grade > self.grade {
            return Err(Error::ContractionGrade {
                p: self.grade,
                q: other.grade,
            });
        }
        let mut out = Self::zero_unchecked(self.dim, self.grade - other.grade);
        for &a in blades(self.dim, self.grade) {
            let ca = self.coeffs[a as usize];
            if ca == 0.0 {
                continue;
            }
            for &b in blades(self.dim, other.grade) {
                if a & b != b {
                    continue;
                }
                let cb = other.coeffs[b as usize];
                if cb != 0.0 {
                    let rest = a & !b;
                    out.coeffs[rest as usize] += wedge_sign(b, rest) * ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// The `•` product: agrees with `⌐` on 1-vectors and obeys
    /// `α • (β ∧ γ) = (α • β) ∧ γ + (-1)^{qr} (α • γ) ∧ β`.
    pub fn bullet(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.grade + other.grade < 2 {
            return Err(Error::BulletUnderflow {
                p: self.grade,
                q: other.grade,
            });
        }
        let grade = self.grade + other.grade - 2;
        if grade > self.dim {
            return Err(Error::GradeOverflow(grade, self.dim));
        }
        let mut out = Self::zero_unchecked(self.dim, grade);
        for &b in blades(self.dim, other.grade) {
            let cb = other.coeffs[b as usize];
            if cb != 0.0 {
                out += self.bullet_blade(b) * cb;
            }
        }
        Ok(out)
    }

    /// `self • e_B`, peeling off the lowest factor of `e_B = e_{b1} ∧ e_rest`.
    fn bullet_blade(&self, b: u8) -> Self {
        let q = b.count_ones() as usize;
        let grade = self.grade + q - 2;
        if self.grade == 0 {
            return Self::zero_unchecked(self.dim, grade);
        }
        let first = b & b.wrapping_neg();
        let e_first = self.single(first);
        let head = self.contract(&e_first).expect("grade checked by caller");
        if q == 1 {
            return head;
        }
        let rest = b & !first;
        let e_rest = self.single(rest);
        let lhs = head.wedge(&e_rest).expect("grade fits");
        let tail = self.bullet_blade(rest).wedge(&e_first).expect("grade fits");
        let sign = if (q - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        lhs + tail * sign
    }

    fn single(&self, mask: u8) -> Self {
        let mut e = Self::zero_unchecked(self.dim, mask.count_ones() as usize);
        e.coeffs[mask as usize] = 1.0;
        e
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ^{}R^{}[", self.grade, self.dim)?;
        let mut first = true;
        for (mask, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}:{c:.6e}", blade_label(mask))?;
        }
        write!(f, "]")
    }
}

/// 1-based label of a blade mask, e.g. `0b101 -> "13"`; the empty blade is `"0"`.
pub fn blade_label(mask: u8) -> String {
    if mask == 0 {
        return "0".to_string();
    }
    (0..MAX_DIM)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| char::from(b'1' + i as u8))
        .collect()
}

impl Add for MultiVector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for MultiVector {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!((self.dim, self.grade), (rhs.dim, rhs.grade), "shape mismatch");
        for &b in blades(self.dim, self.grade) {
            self.coeffs[b as usize] += rhs.coeffs[b as usize];
        }
    }
}

impl Sub for MultiVector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for MultiVector {
    fn sub_assign(&mut self, rhs: Self) {
        assert_eq!((self.dim, self.grade), (rhs.dim, rhs.grade), "shape mismatch");
        for &b in blades(self.dim, self.grade) {
            self.coeffs[b as usize] -= rhs.coeffs[b as usize];
        }
    }
}

impl Neg for MultiVector {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for MultiVector {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for &b in blades(self.dim, self.grade) {
            self.coeffs[b as usize] *= rhs;
        }
        self
    }
}

/// Tolerance on `|n| = 1` and on the projector test.
pub const NORMAL_TOL: f64 = 1e-12;

/// A unit simple `(m-2)`-vector, the oriented normal plane of a surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimpleUnitNormal {
    underlying: MultiVector,
}

impl SimpleUnitNormal {
    /// Validates unit length and decomposability (the normal projection must
    /// be a rank-`(m-2)` orthogonal projector).
    pub fn new(n: MultiVector) -> Result<Self> {
        let m = n.dim();
        if n.grade() + 2 != m {
            return Err(Error::NotSimpleUnit(format!("grade {} in dimension {m}", n.grade())));
        }
        let norm = n.norm();
        if (norm - 1.0).abs() > NORMAL_TOL {
            return Err(Error::NotSimpleUnit(format!("|n| = {norm}")));
        }
        let candidate = Self { underlying: n };
        let p = candidate.projector();
        let mut trace = 0.0;
        let mut defect: f64 = 0.0;
        for i in 0..m {
            trace += p[i][i];
            for j in 0..m {
                let pp: f64 = (0..m).map(|k| p[i][k] * p[k][j]).sum();
                defect = defect.max((pp - p[i][j]).abs()).max((p[i][j] - p[j][i]).abs());
            }
        }
        if defect > 1e3 * NORMAL_TOL || (trace - (m - 2) as f64).abs() > 1e3 * NORMAL_TOL {
            return Err(Error::NotSimpleUnit(format!(
                "projector defect {defect:.3e}, trace {trace}"
            )));
        }
        Ok(candidate)
    }

    /// `⋆(u ∧ v) / |u ∧ v|`.
    pub fn from_tangents(u: &MultiVector, v: &MultiVector) -> Result<Self> {
        let plane = u.wedge(v)?;
        let len = plane.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(Error::NotSimpleUnit("degenerate tangent plane".into()));
        }
        Self::new((plane * (1.0 / len)).hodge())
    }

    /// Trusted constructor for normals built as `⋆(e1 ∧ e2)` from an
    /// orthonormal pair.
    pub(crate) fn from_orthonormal_unchecked(n: MultiVector) -> Self {
        Self { underlying: n }
    }

    pub fn as_multivector(&self) -> &MultiVector {
        &self.underlying
    }

    pub fn dim(&self) -> usize {
        self.underlying.dim()
    }

    /// Rows of the matrix of `π_n` in the standard basis.
    pub fn projector(&self) -> Vec<Vec<f64>> {
        let m = self.dim();
        let mut cols = vec![vec![0.0; m]; m];
        for (j, col) in cols.iter_mut().enumerate() {
            let e = MultiVector::basis_vector(m, j).expect("index in range");
            let img = project_normal_raw(&self.underlying, &e);
            for (i, c) in col.iter_mut().enumerate() {
                *c = img.coeff(1 << i);
            }
        }
        (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect()
    }
}

fn project_normal_raw(n: &MultiVector, w: &MultiVector) -> MultiVector {
    let m = n.dim();
    let inner = n.contract(w).expect("grade m-2 >= 1");
    let out = n.contract(&inner).expect("grade fits");
    if (m - 1).is_multiple_of(2) {
        out
    } else {
        -out
    }
}

/// Projection onto the normal plane: `π_n(w) = (-1)^{m-1} n ⌐ (n ⌐ w)`.
pub fn project_normal(n: &SimpleUnitNormal, w: &MultiVector) -> Result<MultiVector> {
    if w.grade() != 1 {
        return Err(Error::GradeMismatch(w.grade(), 1));
    }
    if w.dim() != n.dim() {
        return Err(Error::DimensionMismatch(w.dim(), n.dim()));
    }
    Ok(project_normal_raw(n.as_multivector(), w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: usize, i: usize) -> MultiVector {
        MultiVector::basis_vector(m, i).unwrap()
    }

    #[test]
    fn wedge_basis_cases() {
        let e12 = e(3, 0).wedge(&e(3, 1)).unwrap();
        assert_eq!(e12.coeff(0b011), 1.0);
        assert_eq!(e12.norm(), 1.0);

        let a = MultiVector::vector(&[0.3, -1.2, 2.0]).unwrap();
        assert_eq!(a.wedge(&a).unwrap().norm(), 0.0);

        let lhs = (e(3, 0) + e(3, 1)).wedge(&e(3, 1)).unwrap();
        assert_eq!(lhs, e12);
    }

    #[test]
    fn wedge_errors() {
        let a = MultiVector::vector(&[1.0, 0.0, 0.0]).unwrap();
        let b = MultiVector::vector(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(a.wedge(&b), Err(Error::DimensionMismatch(3, 4))));
        let vol = MultiVector::volume(3).unwrap();
        assert!(matches!(vol.wedge(&a), Err(Error::GradeOverflow(4, 3))));
    }

    #[test]
    fn hodge_anchors() {
        let e12 = MultiVector::blade(3, &[0, 1]).unwrap();
        assert_eq!(e12.hodge(), e(3, 2));
        assert_eq!(
            MultiVector::scalar(3, 1.0).unwrap().hodge(),
            MultiVector::volume(3).unwrap()
        );
        let star_e1 = e(4, 0).hodge();
        assert_eq!(star_e1, MultiVector::blade(4, &[1, 2, 3]).unwrap());
    }

    #[test]
    fn contraction_anchors() {
        let e12 = MultiVector::blade(3, &[0, 1]).unwrap();
        assert_eq!(e12.contract(&e(3, 0)).unwrap(), e(3, 1));
        assert_eq!(e12.contract(&e(3, 1)).unwrap(), -e(3, 0));
        let one = MultiVector::scalar(3, 1.0).unwrap();
        assert_eq!(e12.contract(&one).unwrap(), e12);
        assert!(matches!(
            e(3, 0).contract(&e12),
            Err(Error::ContractionGrade { p: 1, q: 2 })
        ));
    }

    #[test]
    fn inner_anchors() {
        let e12 = MultiVector::blade(3, &[0, 1]).unwrap();
        let e13 = MultiVector::blade(3, &[0, 2]).unwrap();
        assert_eq!(e12.inner(&e12).unwrap(), 1.0);
        assert_eq!(e12.inner(&e13).unwrap(), 0.0);
        assert!(e12.inner(&e(3, 0)).is_err());
    }

    #[test]
    fn bullet_on_vectors_is_contraction() {
        let a = MultiVector::blade(4, &[0, 2, 3]).unwrap() * 0.7 + MultiVector::blade(4, &[1, 2, 3]).unwrap() * -1.3;
        for i in 0..4 {
            assert_eq!(a.bullet(&e(4, i)).unwrap(), a.contract(&e(4, i)).unwrap());
        }
        let s = MultiVector::scalar(4, 1.0).unwrap();
        assert!(matches!(s.bullet(&e(4, 0)), Err(Error::BulletUnderflow { p: 0, q: 1 })));
    }

    #[test]
    fn projection_m3() {
        let n = SimpleUnitNormal::new(e(3, 2)).unwrap();
        let w = MultiVector::vector(&[0.4, -2.0, 1.5]).unwrap();
        assert_eq!(project_normal(&n, &w).unwrap(), e(3, 2) * 1.5);
        let tangent_plane = SimpleUnitNormal::from_tangents(&e(5, 0), &e(5, 1)).unwrap();
        let img = project_normal(&tangent_plane, &e(5, 0)).unwrap();
        assert!(img.norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unit_or_non_simple_normals() {
        let n = e(3, 2) * 2.0;
        assert!(SimpleUnitNormal::new(n).is_err());
        // e12 + e34 normalised is not decomposable.
        let s = (MultiVector::blade(4, &[0, 1]).unwrap() + MultiVector::blade(4, &[2, 3]).unwrap())
            * std::f64::consts::FRAC_1_SQRT_2;
        assert!(SimpleUnitNormal::new(s).is_err());
    }

    #[test]
    fn blade_labels() {
        assert_eq!(blade_label(0b101), "13");
        assert_eq!(blade_label(0), "0");
        assert_eq!(blades(4, 2).len(), 6);
    }
}
