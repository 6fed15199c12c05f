//! Differential forms with exact polynomial coefficients.
//!
//! `d` and `δ` are written once, generically over any [`Partial`]
//! coefficient type, and instantiated here with [`PolyScalar`]. The random
//! suites behind `verify-identities` live at the bottom of the module.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::{signed, AntisymMatrix2Form, Blade, Multivector};
use crate::poly::{Partial, PolyScalar};

/// `d w = Σ_i e_i ∧ ∂_i w`.
pub fn exterior_derivative<S: Partial>(w: &Multivector<S>) -> Multivector<S> {
    let n = w.dim();
    let mut out = Multivector::zero(n);
    for (blade, c) in w.terms() {
        for axis in 0..n {
            let ei = Blade::from_bits(1 << axis);
            if let Some((sign, target)) = ei.wedge(*blade) {
                let dc = c.partial(axis);
                out.add_term(target, signed(sign, dc)).expect("blade within dimension");
            }
        }
    }
    out
}

/// `δ w = −Σ_i e_i ⌟ ∂_i w`.
pub fn coderivative<S: Partial>(w: &Multivector<S>) -> Multivector<S> {
    let n = w.dim();
    let mut out = Multivector::zero(n);
    for (blade, c) in w.terms() {
        for axis in 0..n {
            if let Some((sign, target)) = blade.contract_by(axis + 1) {
                let dc = c.partial(axis);
                out.add_term(target, signed(-sign, dc)).expect("blade within dimension");
            }
        }
    }
    out
}

/// A homogeneous grade-ℓ form with polynomial coefficients.
///
/// Derivatives of forms that leave `0..=n` are zero forms whose nominal grade
/// is `ℓ+1` or `ℓ−1` (saturating at 0).
#[derive(Clone, PartialEq, Debug)]
pub struct PolyForm {
    grade: usize,
    coeffs: Multivector<PolyScalar>,
}

impl PolyForm {
    pub fn zero(dim: usize, grade: usize) -> Self {
        PolyForm { grade, coeffs: Multivector::zero(dim) }
    }

    pub fn new(grade: usize, coeffs: Multivector<PolyScalar>) -> Result<Self> {
        if grade > coeffs.dim() {
            return Err(Error::GradeOutOfRange { grade, dim: coeffs.dim() });
        }
        if !coeffs.is_homogeneous_of(grade) {
            return Err(Error::WrongGrade {
                expected: grade,
                found: coeffs
                    .homogeneous_grade()
                    .map(|g| g.to_string())
                    .unwrap_or_else(|| "mixed".into()),
            });
        }
        Ok(PolyForm { grade, coeffs })
    }

    pub fn from_terms<I>(dim: usize, grade: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Blade, PolyScalar)>,
    {
        PolyForm::new(grade, Multivector::from_terms(dim, terms)?)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &Multivector<PolyScalar> {
        &self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> PolyScalar {
        self.coeffs.coeff(blade)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Total number of monomials over all blades.
    pub fn term_count(&self) -> usize {
        self.coeffs.terms().map(|(_, c)| c.term_count()).sum()
    }

    pub fn try_add(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_grade(other)?;
        Ok(PolyForm { grade: self.grade, coeffs: self.coeffs.try_add(&other.coeffs)? })
    }

    pub fn try_sub(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_grade(other)?;
        Ok(PolyForm { grade: self.grade, coeffs: self.coeffs.try_sub(&other.coeffs)? })
    }

    fn check_grade(&self, other: &PolyForm) -> Result<()> {
        if self.grade != other.grade && !self.is_zero() && !other.is_zero() {
            return Err(Error::WrongGrade { expected: self.grade, found: other.grade.to_string() });
        }
        Ok(())
    }
}

/// Exact exterior derivative of a polynomial form.
pub fn d_sym(w: &PolyForm) -> PolyForm {
    PolyForm { grade: w.grade + 1, coeffs: exterior_derivative(&w.coeffs) }
}

/// Exact coderivative of a polynomial form.
pub fn delta_sym(w: &PolyForm) -> PolyForm {
    PolyForm { grade: w.grade.saturating_sub(1), coeffs: coderivative(&w.coeffs) }
}

/// The Jacobian `(∂_i u_j)` of a polynomial 1-form.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyJacobian {
    entries: Vec<Vec<PolyScalar>>,
}

impl PolyJacobian {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Entry `(i, j) = ∂_i u_j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &PolyScalar {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<PolyScalar>] {
        &self.entries
    }

    pub fn trace(&self) -> PolyScalar {
        (0..self.dim()).fold(PolyScalar::zero(), |acc, i| acc + self.entries[i][i].clone())
    }
}

fn require_grade(w: &PolyForm, grade: usize) -> Result<()> {
    if w.grade != grade {
        return Err(Error::WrongGrade { expected: grade, found: w.grade.to_string() });
    }
    Ok(())
}

pub fn grad_matrix(u: &PolyForm) -> Result<PolyJacobian> {
    require_grade(u, 1)?;
    let n = u.dim();
    let comps: Vec<PolyScalar> = (1..=n).map(|j| u.coeff(Blade::from_bits(1 << (j - 1)))).collect();
    let entries = (0..n)
        .map(|i| comps.iter().map(|c| c.partial(i)).collect())
        .collect();
    Ok(PolyJacobian { entries })
}

/// Sign convention used for `u ⌟ ·` inside the magic-formula check.
///
/// `FlippedSign` is a deliberate fault that negates every explicit
/// contraction; the identity must then fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ContractionRule {
    #[default]
    Standard,
    FlippedSign,
}

impl ContractionRule {
    fn contract(self, u: &Multivector<PolyScalar>, w: &Multivector<PolyScalar>) -> Result<Multivector<PolyScalar>> {
        let out = crate::exterior::contract(u, w)?;
        Ok(match self {
            ContractionRule::Standard => out,
            ContractionRule::FlippedSign => out.negated(),
        })
    }
}

fn check_magic_inputs(u: &PolyForm, b: &PolyForm) -> Result<()> {
    require_grade(u, 1)?;
    require_grade(b, 2)?;
    if u.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: b.dim() });
    }
    Ok(())
}

/// `d(u⌟b) + δ(u∧b)`.
pub fn magic_lhs(u: &PolyForm, b: &PolyForm) -> Result<PolyForm> {
    magic_lhs_with(u, b, ContractionRule::Standard)
}

/// `δu∧b − u∧δb − u⌟db + (∇u+∇uᵀ)·(b−bᵀ)`, with `b` read as an
/// antisymmetric matrix in the doubled convention.
pub fn magic_rhs(u: &PolyForm, b: &PolyForm) -> Result<PolyForm> {
    magic_rhs_with(u, b, ContractionRule::Standard)
}

pub fn magic_lhs_with(u: &PolyForm, b: &PolyForm, rule: ContractionRule) -> Result<PolyForm> {
    check_magic_inputs(u, b)?;
    let ub = rule.contract(&u.coeffs, &b.coeffs)?;
    let first = exterior_derivative(&ub);
    let second = coderivative(&u.coeffs.wedge(&b.coeffs)?);
    PolyForm::new(2, first.try_add(&second)?)
}

pub fn magic_rhs_with(u: &PolyForm, b: &PolyForm, rule: ContractionRule) -> Result<PolyForm> {
    check_magic_inputs(u, b)?;
    let n = u.dim();
    let du = coderivative(&u.coeffs);
    let db = coderivative(&b.coeffs);
    let curl_b = exterior_derivative(&b.coeffs);

    let mut rhs = du.wedge(&b.coeffs)?;
    rhs = rhs.try_sub(&u.coeffs.wedge(&db)?)?;
    rhs = rhs.try_sub(&rule.contract(&u.coeffs, &curl_b)?)?;

    let g = grad_matrix(u)?;
    let bm = AntisymMatrix2Form::from_multivector(&b.coeffs)?;
    let mut product = vec![vec![PolyScalar::zero(); n]; n];
    for (i, row) in product.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            let mut acc = PolyScalar::zero();
            for j in 0..n {
                let sym = g.get(i, j).clone() + g.get(j, i).clone();
                let anti = bm.get(j, k).clone() - bm.get(k, j).clone();
                acc = acc + sym * anti;
            }
            *slot = acc;
        }
    }
    rhs = rhs.try_add(&crate::exterior::matrix_to_2form(&product)?)?;
    PolyForm::new(2, rhs)
}

/// One failed trial of an identity suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub description: String,
}

/// Outcome of a randomized identity suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    /// Largest monomial count seen among the compared forms.
    pub max_terms: usize,
    pub failures: Vec<Counterexample>,
}

impl SuiteReport {
    fn new(name: impl Into<String>) -> Self {
        SuiteReport { name: name.into(), trials: 0, max_terms: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Multi-indices of total degree ≤ `degree` in `n` variables.
fn multi_indices(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(n, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Sampler for small random polynomial forms.
///
/// Each coefficient has at most three monomials drawn uniformly among the
/// multi-indices of degree ≤ `degree`, with rational values `p/q`,
/// `|p| ≤ 9`, `1 ≤ q ≤ 9`.
pub struct RandomForms {
    n: usize,
    monomials: Vec<Vec<u32>>,
    rng: ChaCha8Rng,
}

impl RandomForms {
    pub fn new(n: usize, degree: u32, seed: u64) -> Self {
        RandomForms { n, monomials: multi_indices(n, degree), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn scalar(&mut self) -> PolyScalar {
        let count = self.rng.random_range(0..=3);
        let mut out = PolyScalar::zero();
        for _ in 0..count {
            let p: i64 = self.rng.random_range(-9..=9);
            let q: i64 = self.rng.random_range(1..=9);
            let exps = self.monomials[self.rng.random_range(0..self.monomials.len())].clone();
            out = out + PolyScalar::monomial(BigRational::new(p.into(), q.into()), exps);
        }
        out
    }

    pub fn form(&mut self, grade: usize) -> PolyForm {
        let mut coeffs = Multivector::zero(self.n);
        for blade in Blade::all(self.n, grade) {
            let c = self.scalar();
            coeffs.add_term(blade, c).expect("blade within dimension");
        }
        PolyForm { grade, coeffs }
    }
}

fn check_n_degree(n: usize, degree: u32, max_n: usize) -> Result<()> {
    if !(3..=max_n).contains(&n) {
        return Err(Error::InvalidConfig(format!("dimension {n} outside 3..={max_n}")));
    }
    if degree > 4 {
        return Err(Error::InvalidConfig(format!("degree {degree} exceeds 4")));
    }
    Ok(())
}

/// Checks `magic_lhs(u, b) = magic_rhs(u, b)` exactly on random pairs.
pub fn verify_magic(n: usize, degree: u32, trials: usize, seed: u64) -> Result<SuiteReport> {
    verify_magic_with(n, degree, trials, seed, ContractionRule::Standard)
}

pub fn verify_magic_with(
    n: usize,
    degree: u32,
    trials: usize,
    seed: u64,
    rule: ContractionRule,
) -> Result<SuiteReport> {
    check_n_degree(n, degree, 6)?;
    let mut report = SuiteReport::new(format!("magic formula (n={n}, degree<={degree})"));
    let mut gen = RandomForms::new(n, degree, seed);
    for trial in 0..trials {
        let u = gen.form(1);
        let b = gen.form(2);
        let lhs = magic_lhs_with(&u, &b, rule)?;
        let rhs = magic_rhs_with(&u, &b, rule)?;
        report.trials += 1;
        report.max_terms = report.max_terms.max(lhs.term_count()).max(rhs.term_count());
        if lhs != rhs {
            let diff = lhs.try_sub(&rhs)?;
            report.failures.push(Counterexample {
                trial,
                description: format!("u = {:?}; b = {:?}; lhs - rhs = {:?}", u.coeffs, b.coeffs, diff.coeffs),
            });
        }
    }
    Ok(report)
}

/// Checks `d∘d = 0` and `δ∘δ = 0` on random forms of every grade.
pub fn verify_complex(n: usize, degree: u32, trials: usize, seed: u64) -> Result<SuiteReport> {
    check_n_degree(n, degree, 6)?;
    let mut report = SuiteReport::new(format!("d^2 = 0 and delta^2 = 0 (n={n}, degree<={degree})"));
    let mut gen = RandomForms::new(n, degree, seed);
    for trial in 0..trials {
        let grade = trial % (n + 1);
        let w = gen.form(grade);
        let dd = d_sym(&d_sym(&w));
        let ee = delta_sym(&delta_sym(&w));
        report.trials += 1;
        report.max_terms = report.max_terms.max(w.term_count());
        if !dd.is_zero() || !ee.is_zero() {
            report.failures.push(Counterexample {
                trial,
                description: format!("w = {:?}; dd w = {:?}; delta delta w = {:?}", w.coeffs, dd.coeffs, ee.coeffs),
            });
        }
    }
    Ok(report)
}

/// Classical vector calculus in dimension 3 and the form dictionary
/// `e23 ~ x`, `e31 ~ y`, `e12 ~ z`, `e123 ~ 1`.
pub mod dim3 {
    use super::*;

    pub type Vector = [PolyScalar; 3];

    fn e(idx: &[usize]) -> Blade {
        Blade::from_indices(idx).expect("valid blade")
    }

    pub fn grad(f: &PolyScalar) -> Vector {
        [f.partial(0), f.partial(1), f.partial(2)]
    }

    pub fn div(v: &Vector) -> PolyScalar {
        v[0].partial(0) + v[1].partial(1) + v[2].partial(2)
    }

    pub fn curl(v: &Vector) -> Vector {
        [
            v[2].partial(1) - v[1].partial(2),
            v[0].partial(2) - v[2].partial(0),
            v[1].partial(0) - v[0].partial(1),
        ]
    }

    pub fn cross(a: &Vector, b: &Vector) -> Vector {
        [
            a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
            a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
            a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
        ]
    }

    pub fn neg(v: &Vector) -> Vector {
        [-v[0].clone(), -v[1].clone(), -v[2].clone()]
    }

    pub fn scalar_form(f: &PolyScalar) -> PolyForm {
        PolyForm::from_terms(3, 0, [(Blade::SCALAR, f.clone())]).expect("grade 0")
    }

    pub fn vector_1form(v: &Vector) -> PolyForm {
        PolyForm::from_terms(3, 1, [(e(&[1]), v[0].clone()), (e(&[2]), v[1].clone()), (e(&[3]), v[2].clone())])
            .expect("grade 1")
    }

    pub fn vector_2form(v: &Vector) -> PolyForm {
        PolyForm::from_terms(3, 2, [(e(&[2, 3]), v[0].clone()), (e(&[1, 3]), -v[1].clone()), (e(&[1, 2]), v[2].clone())])
            .expect("grade 2")
    }

    pub fn volume_form(f: &PolyScalar) -> PolyForm {
        PolyForm::from_terms(3, 3, [(e(&[1, 2, 3]), f.clone())]).expect("grade 3")
    }

    /// Reads a 1-form as a vector.
    pub fn from_1form(w: &PolyForm) -> Vector {
        [w.coeff(e(&[1])), w.coeff(e(&[2])), w.coeff(e(&[3]))]
    }

    /// Reads a 2-form as a vector.
    pub fn from_2form(w: &PolyForm) -> Vector {
        [w.coeff(e(&[2, 3])), -w.coeff(e(&[1, 3])), w.coeff(e(&[1, 2]))]
    }

    /// Compares `d`, `δ` with grad/curl/div on one random scalar and vector;
    /// returns the names of the mismatching correspondences.
    pub fn dictionary_mismatches(f: &PolyScalar, v: &Vector) -> Vec<&'static str> {
        let mut bad = Vec::new();
        if d_sym(&scalar_form(f)) != vector_1form(&grad(f)) {
            bad.push("d on 0-forms = grad");
        }
        if d_sym(&vector_1form(v)) != vector_2form(&curl(v)) {
            bad.push("d on 1-forms = curl");
        }
        if d_sym(&vector_2form(v)) != volume_form(&div(v)) {
            bad.push("d on 2-forms = div");
        }
        if delta_sym(&vector_1form(v)) != scalar_form(&-div(v)) {
            bad.push("delta on 1-forms = -div");
        }
        if delta_sym(&vector_2form(v)) != vector_1form(&curl(v)) {
            bad.push("delta on 2-forms = curl");
        }
        if delta_sym(&volume_form(f)) != vector_2form(&neg(&grad(f))) {
            bad.push("delta on 3-forms = -grad");
        }
        bad
    }
}

/// Checks the dimension-3 dictionary on random polynomial data.
pub fn verify_dim3_dictionary(degree: u32, trials: usize, seed: u64) -> Result<SuiteReport> {
    check_n_degree(3, degree, 3)?;
    let mut report = SuiteReport::new(format!("dimension-3 grad/curl/div dictionary (degree<={degree})"));
    let mut gen = RandomForms::new(3, degree, seed);
    for trial in 0..trials {
        let f = gen.scalar();
        let v = [gen.scalar(), gen.scalar(), gen.scalar()];
        report.trials += 1;
        report.max_terms = report
            .max_terms
            .max(f.term_count() + v.iter().map(|c| c.term_count()).sum::<usize>());
        let bad = dim3::dictionary_mismatches(&f, &v);
        if !bad.is_empty() {
            report.failures.push(Counterexample {
                trial,
                description: format!("f = {f}; v = ({}, {}, {}); failed: {}", v[0], v[1], v[2], bad.join(", ")),
            });
        }
    }
    Ok(report)
}
