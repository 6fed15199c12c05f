use mhd_forms::exterior::{rational, Blade, Multivector};
use mhd_forms::symbolic::{
    d_sym, delta_sym, dim3, magic_lhs, magic_rhs, verify_complex, verify_dim3_dictionary, verify_magic,
    verify_magic_with, ContractionRule, PolyForm, RandomForms,
};
use mhd_forms::{contract, normal_split, wedge, PolyScalar};
use num_rational::BigRational;
use proptest::prelude::*;

fn blade_mv(n: usize, b: Blade) -> Multivector<BigRational> {
    Multivector::blade(n, b, rational(1, 1)).unwrap()
}

fn all_blades(n: usize) -> Vec<Blade> {
    (0..=n).flat_map(|g| Blade::all(n, g)).collect()
}

#[test]
fn wedge_is_associative_on_all_blade_triples() {
    let n = 4;
    let blades = all_blades(n);
    for &a in &blades {
        for &b in &blades {
            for &c in &blades {
                let (a, b, c) = (blade_mv(n, a), blade_mv(n, b), blade_mv(n, c));
                let left = wedge(&wedge(&a, &b).unwrap(), &c).unwrap();
                let right = wedge(&a, &wedge(&b, &c).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn wedge_is_graded_commutative() {
    for n in 1..=6 {
        let blades = all_blades(n);
        for &a in &blades {
            for &b in &blades {
                let ab = wedge(&blade_mv(n, a), &blade_mv(n, b)).unwrap();
                let ba = wedge(&blade_mv(n, b), &blade_mv(n, a)).unwrap();
                if (a.grade() * b.grade()) % 2 == 0 {
                    assert_eq!(ab, ba);
                } else {
                    assert_eq!(ab, ba.negated());
                }
            }
        }
    }
}

#[test]
fn contraction_is_an_antiderivation() {
    for n in 1..=5 {
        let blades = all_blades(n);
        for i in 1..=n {
            let x = Multivector::basis(n, i).unwrap();
            for &a in &blades {
                let am = blade_mv(n, a);
                assert!(contract(&x, &contract(&x, &am).unwrap()).unwrap().is_zero());
                for &b in &blades {
                    let bm = blade_mv(n, b);
                    let lhs = contract(&x, &wedge(&am, &bm).unwrap()).unwrap();
                    let first = wedge(&contract(&x, &am).unwrap(), &bm).unwrap();
                    let mut second = wedge(&am, &contract(&x, &bm).unwrap()).unwrap();
                    if a.grade() % 2 == 1 {
                        second = second.negated();
                    }
                    assert_eq!(lhs, first.try_add(&second).unwrap());
                }
            }
        }
    }
}

#[test]
fn contraction_and_wedge_by_same_vector_resolve_identity() {
    // e_i ⌟ (e_i ∧ w) + e_i ∧ (e_i ⌟ w) = w for every blade w.
    for n in 1..=6 {
        for i in 1..=n {
            let x = Multivector::basis(n, i).unwrap();
            for a in all_blades(n) {
                let w = blade_mv(n, a);
                let (t, nn) = normal_split(&x, &w).unwrap();
                assert_eq!(t.try_add(&nn).unwrap(), w);
            }
        }
    }
}

#[test]
fn magic_formula_across_dimensions() {
    for n in 3..=6 {
        let r = verify_magic(n, 2, 25, 77 + n as u64).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        assert_eq!(r.trials, 25);
    }
}

#[test]
fn flipped_contraction_sign_is_caught() {
    let r = verify_magic_with(3, 2, 20, 5, ContractionRule::FlippedSign).unwrap();
    assert!(!r.passed());
    assert!(!r.failures[0].description.is_empty());
}

#[test]
fn suites_reject_bad_parameters() {
    assert!(verify_magic(2, 2, 1, 0).is_err());
    assert!(verify_magic(7, 2, 1, 0).is_err());
    assert!(verify_magic(3, 5, 1, 0).is_err());
    assert!(verify_dim3_dictionary(5, 1, 0).is_err());
}

#[test]
fn zero_trials_pass_trivially() {
    let r = verify_magic(3, 3, 0, 0).unwrap();
    assert!(r.passed());
    assert_eq!(r.trials, 0);
}

#[test]
fn complex_and_dictionary_suites() {
    for n in 3..=6 {
        assert!(verify_complex(n, 3, 30, n as u64).unwrap().passed());
    }
    assert!(verify_dim3_dictionary(3, 30, 9).unwrap().passed());
}

#[test]
fn magic_formula_on_hand_built_fields() {
    // u = x2 e1, b = x1 e12: both sides by hand are polynomials of degree 1.
    let x = PolyScalar::var;
    let e = |idx: &[usize]| Blade::from_indices(idx).unwrap();
    let u = PolyForm::from_terms(3, 1, [(e(&[1]), x(1))]).unwrap();
    let b = PolyForm::from_terms(3, 2, [(e(&[1, 2]), x(0))]).unwrap();
    assert_eq!(magic_lhs(&u, &b).unwrap(), magic_rhs(&u, &b).unwrap());
    // d(u⌟b) computed independently: u⌟b = x2·x1 e2, d = x2 e12 + x1 e22(=0) → x2 e12.
    let u_contract_b = PolyForm::from_terms(3, 1, [(e(&[2]), x(0) * x(1))]).unwrap();
    let expected = PolyForm::from_terms(3, 2, [(e(&[1, 2]), x(1))]).unwrap();
    assert_eq!(d_sym(&u_contract_b), expected);
    assert_eq!(magic_lhs(&u, &b).unwrap(), expected);
}

#[test]
fn lorentz_and_induction_match_vector_calculus_up_to_sign() {
    // δb⌟b ↔ B×curl B and d(u⌟b) ↔ −curl(u×B) under the 2-form dictionary.
    let mut gen = RandomForms::new(3, 2, 21);
    for _ in 0..10 {
        let uv = [gen.scalar(), gen.scalar(), gen.scalar()];
        let bv = [gen.scalar(), gen.scalar(), gen.scalar()];
        let u = dim3::vector_1form(&uv);
        let b = dim3::vector_2form(&bv);
        let lorentz = mhd_forms::contract(delta_sym(&b).coeffs(), b.coeffs()).unwrap();
        let expected = dim3::cross(&bv, &dim3::curl(&bv));
        assert_eq!(dim3::from_1form(&PolyForm::new(1, lorentz).unwrap()), expected);

        let ub = PolyForm::new(1, mhd_forms::contract(u.coeffs(), b.coeffs()).unwrap()).unwrap();
        let induction = dim3::from_2form(&d_sym(&ub));
        assert_eq!(induction, dim3::neg(&dim3::curl(&dim3::cross(&uv, &bv))));
    }
}

#[test]
fn d_satisfies_leibniz_on_products() {
    let mut gen = RandomForms::new(4, 2, 3);
    for grade in 0..=4 {
        let f = gen.scalar();
        let w = gen.form(grade);
        let fw = PolyForm::new(grade, w.coeffs().scaled(&f)).unwrap();
        let df = d_sym(&PolyForm::from_terms(4, 0, [(Blade::SCALAR, f.clone())]).unwrap());
        let rhs = wedge(df.coeffs(), w.coeffs()).unwrap().try_add(&d_sym(&w).coeffs().scaled(&f)).unwrap();
        assert_eq!(d_sym(&fw).coeffs(), &rhs);
    }
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, q)| rational(p, q))
}

fn rational_form(n: usize, grade: usize) -> impl Strategy<Value = Multivector<BigRational>> {
    let blades = Blade::all(n, grade);
    prop::collection::vec(small_rational(), blades.len())
        .prop_map(move |cs| Multivector::from_terms(n, blades.clone().into_iter().zip(cs)).unwrap())
}

proptest! {
    #[test]
    fn wedge_distributes_over_addition(
        a in rational_form(4, 1),
        b in rational_form(4, 2),
        c in rational_form(4, 2),
    ) {
        let lhs = wedge(&a, &b.try_add(&c).unwrap()).unwrap();
        let rhs = wedge(&a, &b).unwrap().try_add(&wedge(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vector_wedge_itself_vanishes(a in rational_form(5, 1)) {
        prop_assert!(wedge(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn contraction_by_vector_of_its_own_wedge(x in rational_form(4, 1), w in rational_form(4, 2)) {
        // x⌟(x∧w) + x∧(x⌟w) = |x|² w
        let t = contract(&x, &wedge(&x, &w).unwrap()).unwrap();
        let nn = wedge(&x, &contract(&x, &w).unwrap()).unwrap();
        prop_assert_eq!(t.try_add(&nn).unwrap(), w.scaled(&x.vector_norm_sq()));
    }

    #[test]
    fn random_polynomial_forms_close_the_complex(seed in 0u64..1000, grade in 0usize..=5) {
        let mut gen = RandomForms::new(5, 3, seed);
        let w = gen.form(grade);
        prop_assert!(d_sym(&d_sym(&w)).is_zero());
        prop_assert!(delta_sym(&delta_sym(&w)).is_zero());
    }
}
