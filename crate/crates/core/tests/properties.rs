use num_complex::Complex64;
use permcheck::inequality::{check_chollet_pair, check_chollet_reduced, check_lieb, rationalize};
use permcheck::io::{parse_matrix_str, AnyMatrix, MatrixFile};
use permcheck::matrixlab::{
    hadamard_abs2, permute_similarity, sample_correlation, sample_rational_correlation, CorrelationMatrix, PsdMatrix,
    SampleMethod,
};
use permcheck::permanent::{permanent_naive, permanent_ryser};
use permcheck::proof4x4::{
    expansion_per, expansion_per_hadamard, lemma1_identities, lemma2_identities, verify_case_chain, EntryVector,
    Verdict,
};
use permcheck::{GaussRat, Permutation, SquareMatrix};
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-12i64..=12, 1i64..=12, -12i64..=12, 1i64..=12).prop_map(|(p, q, r, s)| GaussRat::from_ratios(p, q, r, s))
}

fn entry_vector() -> impl Strategy<Value = EntryVector<GaussRat>> {
    prop::array::uniform6(gauss()).prop_map(EntryVector::from_array)
}

fn exact_matrix(n: usize) -> impl Strategy<Value = SquareMatrix<GaussRat>> {
    prop::collection::vec(gauss(), n * n).prop_map(move |d| SquareMatrix::new(n, d).unwrap())
}

fn method() -> impl Strategy<Value = SampleMethod> {
    prop_oneof![
        Just(SampleMethod::GramUnitComplex),
        Just(SampleMethod::GramUnitReal),
        (1usize..4).prop_map(SampleMethod::RankDeficient),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_match_engine(e in entry_vector()) {
        let a = e.assemble();
        prop_assert_eq!(permanent_naive(&a).unwrap().re, expansion_per(&e));
        prop_assert_eq!(permanent_ryser(&hadamard_abs2(&a)).unwrap().re, expansion_per_hadamard(&e));
    }

    #[test]
    fn minor_identities_are_exact(e in entry_vector()) {
        prop_assert!(lemma1_identities(&e, 0.0).unwrap().iter().all(|c| c.holds));
        prop_assert!(lemma2_identities(&e, 0.0).unwrap().iter().all(|c| c.holds));
    }

    #[test]
    fn permanent_is_similarity_invariant(m in exact_matrix(5), images in Just((0..5).collect::<Vec<_>>()).prop_shuffle()) {
        let sigma = Permutation::new(images).unwrap();
        let p = permute_similarity(&m, &sigma).unwrap();
        prop_assert_eq!(permanent_ryser(&m).unwrap(), permanent_ryser(&p).unwrap());
    }

    #[test]
    fn reduced_inequality_holds_at_four(seed in any::<u64>(), method in method()) {
        let a = sample_correlation(4, seed, method).unwrap();
        let r = check_chollet_reduced(&a, 1e-9).unwrap();
        prop_assert!(r.holds, "margin {}", r.margin);
        prop_assert_eq!(verify_case_chain(&a, 1e-9).unwrap().verdict, Verdict::Verified);
    }

    #[test]
    fn pair_inequality_holds_up_to_six(seed in any::<u64>(), n in 2usize..=6) {
        let a = PsdMatrix::new(sample_correlation(n, seed, SampleMethod::GramUnitComplex).unwrap().into_matrix()).unwrap();
        let b = PsdMatrix::new(sample_correlation(n, !seed, SampleMethod::GramUnitReal).unwrap().into_matrix()).unwrap();
        prop_assert!(check_chollet_pair(&a, &b, 1e-9).unwrap().holds);
        for k in 1..n {
            prop_assert!(check_lieb(&a, k, 1e-9).unwrap().holds());
        }
    }

    #[test]
    fn exact_samples_verify_exactly(seed in 0u64..10_000, dim in 1usize..=4) {
        let a = sample_rational_correlation(4, dim, seed % 2 == 0, seed).unwrap();
        prop_assert_eq!(verify_case_chain(&a, 0.0).unwrap().verdict, Verdict::Verified);
    }

    #[test]
    fn rational_files_round_trip(m in exact_matrix(3)) {
        let text = serde_json::to_string(&MatrixFile::from_matrix(&m)).unwrap();
        match parse_matrix_str(&text).unwrap() {
            AnyMatrix::Rational(back) => prop_assert_eq!(back, m),
            AnyMatrix::Float(_) => prop_assert!(false, "mode lost"),
        }
    }

    #[test]
    fn float_files_round_trip(seed in any::<u64>()) {
        let a = sample_correlation(3, seed, SampleMethod::GramUnitComplex).unwrap();
        let text = serde_json::to_string(&MatrixFile::from_matrix(a.matrix())).unwrap();
        match parse_matrix_str(&text).unwrap() {
            AnyMatrix::Float(back) => prop_assert_eq!(&back, a.matrix()),
            AnyMatrix::Rational(_) => prop_assert!(false, "mode lost"),
        }
    }

    #[test]
    fn rationalized_samples_keep_their_entries(seed in any::<u64>()) {
        let a = sample_correlation(4, seed, SampleMethod::GramUnitComplex).unwrap();
        let exact = rationalize(a.matrix(), true).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                let z: Complex64 = permcheck::Scalar::to_c64(exact.get(i, j));
                prop_assert_eq!(z, *a.matrix().get(i, j));
            }
        }
        prop_assert!(CorrelationMatrix::new(exact).is_ok());
    }
}
