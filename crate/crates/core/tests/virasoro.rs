use proptest::prelude::*;
use virfusion::exactlin::{frac, int, Rational};
use virfusion::virasoro::*;

fn count_partitions(n: u32, max_part: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max_part.min(n)).map(|p| count_partitions(n - p, p)).sum()
}

#[test]
fn partition_counts_match_recursion() {
    let counts = partition_counts(20);
    for n in 0..=20u32 {
        assert_eq!(counts[n as usize], count_partitions(n, n).into(), "n={n}");
        assert_eq!(partitions(n).len() as u64, count_partitions(n, n));
    }
}

#[test]
fn level_two_determinant() {
    for (c, h) in [(int(1), int(0)), (int(1), frac(1, 4)), (int(2), int(1)), (frac(1, 2), frac(1, 16))] {
        let g = gram_matrix(&VermaParams::new(c.clone(), h.clone()), 2);
        let kac = int(2) * &h * (int(16) * &h * &h + int(2) * &h * (&c - int(5)) + &c);
        assert_eq!(g.det().unwrap(), kac, "c={c} h={h}");
    }
}

#[test]
fn first_singular_levels_at_c1() {
    for m in 0..=3i64 {
        let p = VermaParams::ints(1, m * m);
        assert_eq!(first_singular_level(&p, 8), Some((2 * m + 1) as u32), "h={}", m * m);
    }
    assert_eq!(first_singular_level(&VermaParams::new(int(1), frac(1, 4)), 8), Some(2));
    assert_eq!(first_singular_level(&VermaParams::ints(1, 2), 6), None);
    assert_eq!(first_singular_level(&VermaParams::ints(2, 1), 6), None);
}

#[test]
fn level_zero_has_no_singular_vectors() {
    assert!(singular_vectors(&VermaParams::ints(1, 0), 0).is_err());
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| frac(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gram_symmetric(c in rational(), h in rational(), level in 0u32..=4) {
        prop_assert!(gram_matrix(&VermaParams::new(c, h), level).is_symmetric());
    }

    #[test]
    fn singular_vectors_are_annihilated(m in 0i64..=2, extra in 0u32..=1) {
        let p = VermaParams::ints(1, m * m);
        let module = VermaModule::new(p.clone());
        let level = (2 * m + 1) as u32 + extra;
        for v in module.singular_vectors(level).unwrap() {
            for n in 1..=level as i64 {
                prop_assert!(module.apply_mode(n, &v).is_zero(), "L({}) on {}", n, v);
            }
        }
    }

    #[test]
    fn gram_rank_is_irreducible_dimension(m in 0i64..=2) {
        let p = VermaParams::ints(1, m * m);
        let dims = graded_dims_irreducible(&p, 6);
        for (l, d) in dims.iter().enumerate() {
            prop_assert_eq!(*d, gram_matrix(&p, l as u32).rank());
        }
    }
}
