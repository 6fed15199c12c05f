//! Pointwise exterior algebra of Λ(ℝⁿ).
//!
//! Basis blades `e_J = e_{j1} ∧ ... ∧ e_{jℓ}` are stored as bitmasks (bit `i-1`
//! set when index `i` is present), so every sign is a parity of popcounts.
//! [`Multivector`] is generic over the coefficient ring: exact rationals and
//! polynomials for identity checks, `f64` for fields.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported dimension (one bit per basis vector).
pub const MAX_DIM: usize = 64;

/// Additive coefficient group: enough structure for linear operators such as
/// the exterior derivative.
pub trait Coefficient:
    Clone + PartialEq + fmt::Debug + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone + PartialEq + fmt::Debug + Zero + Add<Output = T> + Sub<Output = T> + Neg<Output = T>
{
}

/// Commutative coefficient ring used by wedge and contraction.
pub trait Scalar: Coefficient + One + Mul<Output = Self> {
    /// `self / 2`.
    fn half(&self) -> Self;

    /// Equality up to `tol` for floating backends, exact equality otherwise.
    fn within(&self, other: &Self, tol: f64) -> bool;

    /// Best-effort conversion used in diagnostics.
    fn approx_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn half(&self) -> Self {
        0.5 * self
    }

    fn within(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn half(&self) -> Self {
        self / BigRational::from_integer(2.into())
    }

    fn within(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// A basis blade `e_J`; the empty index set is the scalar blade of Λ⁰.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Basis vector `e_i` (1-based).
    pub fn basis(i: usize) -> Result<Blade> {
        if i == 0 || i > MAX_DIM {
            return Err(Error::InvalidBlade(format!("index {i} outside 1..={MAX_DIM}")));
        }
        Ok(Blade(1 << (i - 1)))
    }

    /// Blade from a strictly increasing list of 1-based indices.
    pub fn from_indices(indices: &[usize]) -> Result<Blade> {
        let mut bits = 0u64;
        let mut last = 0usize;
        for &i in indices {
            if i <= last {
                return Err(Error::InvalidBlade(format!(
                    "indices {indices:?} are not strictly increasing and positive"
                )));
            }
            bits |= Blade::basis(i)?.0;
            last = i;
        }
        Ok(Blade(bits))
    }

    pub fn from_bits(bits: u64) -> Blade {
        Blade(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.grade());
        let mut bits = self.0;
        while bits != 0 {
            let tz = bits.trailing_zeros() as usize;
            out.push(tz + 1);
            bits &= bits - 1;
        }
        out
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= MAX_DIM && self.0 & (1 << (i - 1)) != 0
    }

    /// Largest index present (0 for the scalar blade).
    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// `e_A ∧ e_B = sign · e_{A∪B}`, or `None` when the index sets meet.
    pub fn wedge(self, other: Blade) -> Option<(i8, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each pair (a ∈ A, b ∈ B) with a > b costs one transposition.
        let mut swaps = 0u32;
        let mut bits = other.0;
        while bits != 0 {
            let b = bits.trailing_zeros();
            swaps += (self.0 >> b).count_ones();
            bits &= bits - 1;
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, Blade(self.0 | other.0)))
    }

    /// `e_i ⌟ e_J`: removes index `i` with sign `(−1)^(k−1)` where `i = j_k`.
    pub fn contract_by(self, i: usize) -> Option<(i8, Blade)> {
        if !self.contains(i) {
            return None;
        }
        let below = (self.0 & ((1u64 << (i - 1)) - 1)).count_ones();
        let sign = if below % 2 == 0 { 1 } else { -1 };
        Some((sign, Blade(self.0 & !(1 << (i - 1)))))
    }

    /// All grade-ℓ blades of Λ(ℝⁿ) in lexicographic index order.
    pub fn all(dim: usize, grade: usize) -> Vec<Blade> {
        let mut out = Vec::new();
        if grade > dim {
            return out;
        }
        let mut idx: Vec<usize> = (1..=grade).collect();
        loop {
            out.push(Blade::from_indices(&idx).expect("valid combination"));
            // Advance to the next combination.
            let mut k = grade;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if idx[k] < dim - (grade - 1 - k) {
                    idx[k] += 1;
                    for m in k + 1..grade {
                        idx[m] = idx[m - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = self.indices();
        match idx.len() {
            0 => write!(f, "1"),
            1 => write!(f, "e{}", idx[0]),
            _ => {
                let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                write!(f, "e{{{}}}", parts.join(","))
            }
        }
    }
}

/// Element of Λ(ℝⁿ) with coefficients in `S`. Absent blades are zero.
#[derive(Clone, PartialEq)]
pub struct Multivector<S> {
    dim: usize,
    terms: BTreeMap<Blade, S>,
}

impl<S: Coefficient> Multivector<S> {
    pub fn zero(dim: usize) -> Self {
        Multivector { dim, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Blade, S)>,
    {
        let mut mv = Multivector::zero(dim);
        for (blade, coeff) in terms {
            mv.add_term(blade, coeff)?;
        }
        Ok(mv)
    }

    /// Single-term multivector `coeff · e_J`.
    pub fn blade(dim: usize, blade: Blade, coeff: S) -> Result<Self> {
        Multivector::from_terms(dim, [(blade, coeff)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    /// Accumulates `coeff · e_J`, dropping the entry when it cancels.
    pub fn add_term(&mut self, blade: Blade, coeff: S) -> Result<()> {
        if blade.max_index() > self.dim {
            return Err(Error::InvalidBlade(format!("{blade} does not live in dimension {}", self.dim)));
        }
        accumulate(&mut self.terms, blade, coeff);
        Ok(())
    }

    /// The grade shared by every stored term, if there is exactly one.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|b| b.grade());
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, grade: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == grade)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            accumulate(&mut out.terms, *b, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            accumulate(&mut out.terms, *b, -c.clone());
        }
        Ok(out)
    }

    pub fn negated(&self) -> Self {
        Multivector {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, -c.clone())).collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs<T: Coefficient>(&self, mut f: impl FnMut(&S) -> T) -> Multivector<T> {
        let mut out = Multivector::zero(self.dim);
        for (b, c) in &self.terms {
            accumulate(&mut out.terms, *b, f(c));
        }
        out
    }

    /// Keeps exactly the grade-ℓ part.
    pub fn grade_project(&self, grade: usize) -> Result<Self> {
        if grade > self.dim {
            return Err(Error::GradeOutOfRange { grade, dim: self.dim });
        }
        Ok(Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == grade)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        })
    }
}

impl<S: Scalar> Multivector<S> {
    /// The grade-1 element `e_i`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        Multivector::blade(dim, Blade::basis(i)?, S::one())
    }

    pub fn scalar(dim: usize, value: S) -> Self {
        let mut mv = Multivector::zero(dim);
        accumulate(&mut mv.terms, Blade::SCALAR, value);
        mv
    }

    /// Grade-1 element with the given coefficients on `e_1..e_n`.
    pub fn vector(coeffs: Vec<S>) -> Self {
        let dim = coeffs.len();
        let mut mv = Multivector::zero(dim);
        for (i, c) in coeffs.into_iter().enumerate() {
            accumulate(&mut mv.terms, Blade(1 << i), c);
        }
        mv
    }

    pub fn scaled(&self, factor: &S) -> Self {
        self.map_coeffs(|c| c.clone() * factor.clone())
    }

    /// Exterior product, bilinear over blades.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = Multivector::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((sign, blade)) = a.wedge(*b) {
                    let prod = ca.clone() * cb.clone();
                    accumulate(&mut out.terms, blade, signed(sign, prod));
                }
            }
        }
        Ok(out)
    }

    /// Left interior product `x ⌟ self` by a grade-1 element `x`.
    pub fn contract_by(&self, x: &Self) -> Result<Self> {
        contract(x, self)
    }

    /// Squared euclidean norm of the grade-1 coefficients.
    pub fn vector_norm_sq(&self) -> S {
        self.terms
            .iter()
            .filter(|(b, _)| b.grade() == 1)
            .fold(S::zero(), |acc, (_, c)| acc + c.clone() * c.clone())
    }
}

impl<S: fmt::Debug> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(b, c)| format!("({c:?})·{b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

pub(crate) fn signed<S: Neg<Output = S>>(sign: i8, value: S) -> S {
    if sign < 0 {
        -value
    } else {
        value
    }
}

fn accumulate<S: Coefficient>(terms: &mut BTreeMap<Blade, S>, blade: Blade, coeff: S) {
    if coeff.is_zero() {
        return;
    }
    match terms.get_mut(&blade) {
        Some(existing) => {
            let sum = existing.clone() + coeff;
            if sum.is_zero() {
                terms.remove(&blade);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(blade, coeff);
        }
    }
}

fn require_grade_one<S: Coefficient>(x: &Multivector<S>) -> Result<()> {
    if !x.is_homogeneous_of(1) {
        let found = x
            .homogeneous_grade()
            .map(|g| g.to_string())
            .unwrap_or_else(|| "mixed".to_string());
        return Err(Error::WrongGrade { expected: 1, found });
    }
    Ok(())
}

/// `a ∧ b`.
pub fn wedge<S: Scalar>(a: &Multivector<S>, b: &Multivector<S>) -> Result<Multivector<S>> {
    a.wedge(b)
}

/// Left contraction `x ⌟ w` for grade-1 `x`; lowers grade by one and kills scalars.
pub fn contract<S: Scalar>(x: &Multivector<S>, w: &Multivector<S>) -> Result<Multivector<S>> {
    require_grade_one(x)?;
    check_dims(x.dim, w.dim)?;
    let mut out = Multivector::zero(w.dim);
    for (xi, cx) in &x.terms {
        let i = xi.indices()[0];
        for (blade, cw) in &w.terms {
            if let Some((sign, rest)) = blade.contract_by(i) {
                accumulate(&mut out.terms, rest, signed(sign, cx.clone() * cw.clone()));
            }
        }
    }
    Ok(out)
}

/// Keeps exactly the grade-ℓ coefficients of `w`.
pub fn grade_project<S: Coefficient>(w: &Multivector<S>, grade: usize) -> Result<Multivector<S>> {
    w.grade_project(grade)
}

/// Splits `u = ν⌟(ν∧u) + ν∧(ν⌟u)` into its tangential and normal parts with
/// respect to a unit vector `ν`.
pub fn normal_split<S: Scalar>(
    nu: &Multivector<S>,
    u: &Multivector<S>,
) -> Result<(Multivector<S>, Multivector<S>)> {
    require_grade_one(nu)?;
    check_dims(nu.dim, u.dim)?;
    let norm_sq = nu.vector_norm_sq();
    if !norm_sq.within(&S::one(), 1e-12) {
        return Err(Error::NotUnit { norm_sq: norm_sq.approx_f64() });
    }
    let tangential = contract(nu, &nu.wedge(u)?)?;
    let normal = nu.wedge(&contract(nu, u)?)?;
    Ok((tangential, normal))
}

/// `Σ_{i,j} M_ij e_i ∧ e_j`; the wedge antisymmetrizes, so the coefficient of
/// `e_{ij}` (i < j) is `M_ij − M_ji`.
pub fn matrix_to_2form<S: Scalar>(matrix: &[Vec<S>]) -> Result<Multivector<S>> {
    let dim = matrix.len();
    for row in matrix {
        if row.len() != dim {
            return Err(Error::NonSquare { rows: dim, cols: row.len() });
        }
    }
    let mut out = Multivector::zero(dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let coeff = matrix[i][j].clone() - matrix[j][i].clone();
            accumulate(&mut out.terms, Blade((1 << i) | (1 << j)), coeff);
        }
    }
    Ok(out)
}

/// A 2-form held as an antisymmetric matrix in the doubled convention
/// `b = Σ_{j,k} b_jk e_j ∧ e_k`, so the canonical `e_{jk}` coefficient
/// (j < k) equals `2 b_jk`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymMatrix2Form<S> {
    entries: Vec<Vec<S>>,
}

/// Tolerance on `M_kj + M_jk` for floating backends.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

impl<S: Scalar> AntisymMatrix2Form<S> {
    pub fn new(entries: Vec<Vec<S>>) -> Result<Self> {
        let dim = entries.len();
        for row in &entries {
            if row.len() != dim {
                return Err(Error::NonSquare { rows: dim, cols: row.len() });
            }
        }
        for j in 0..dim {
            for k in j..dim {
                let sum = entries[j][k].clone() + entries[k][j].clone();
                if !sum.within(&S::zero(), ANTISYMMETRY_TOL) {
                    return Err(Error::NotAntisymmetric { row: j, col: k });
                }
            }
        }
        Ok(AntisymMatrix2Form { entries })
    }

    pub fn from_multivector(b: &Multivector<S>) -> Result<Self> {
        if !b.is_homogeneous_of(2) {
            return Err(Error::WrongGrade {
                expected: 2,
                found: b.homogeneous_grade().map(|g| g.to_string()).unwrap_or_else(|| "mixed".into()),
            });
        }
        let dim = b.dim();
        let mut entries = vec![vec![S::zero(); dim]; dim];
        for (blade, c) in b.terms() {
            let idx = blade.indices();
            let (j, k) = (idx[0] - 1, idx[1] - 1);
            let half = c.half();
            entries[k][j] = -half.clone();
            entries[j][k] = half;
        }
        Ok(AntisymMatrix2Form { entries })
    }

    pub fn to_multivector(&self) -> Multivector<S> {
        let dim = self.dim();
        let mut out = Multivector::zero(dim);
        for j in 0..dim {
            for k in j + 1..dim {
                let c = self.entries[j][k].clone() + self.entries[j][k].clone();
                accumulate(&mut out.terms, Blade((1 << j) | (1 << k)), c);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<S>] {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> &S {
        &self.entries[j][k]
    }
}

/// Exact rational `p/q`.
pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Euclidean length of a float grade-1 element.
pub fn vector_norm(x: &Multivector<f64>) -> f64 {
    x.vector_norm_sq().abs().sqrt()
}

/// Largest absolute coefficient, useful as a float residual.
pub fn max_abs<S: Scalar>(w: &Multivector<S>) -> f64 {
    w.terms().map(|(_, c)| c.approx_f64().abs()).fold(0.0, f64::max)
}

/// `|c|` of an exact rational, for reports.
pub fn rational_abs(c: &BigRational) -> BigRational {
    c.abs()
}
