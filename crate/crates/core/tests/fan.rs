mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::{corpus, BUDGET};
use toric_wci_core::exactmat::{smith_normal_form, IntMatrix};
use toric_wci_core::fan::{self, Fan, Violation};
use toric_wci_core::Error;

/// gcd of the maximal minors of a k x n matrix with k <= n.
fn minors_gcd(rows: &[Vec<i64>]) -> i64 {
    let k = rows.len();
    let n = rows[0].len();
    let mut g = 0i64;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let sub: Vec<Vec<BigInt>> =
            rows.iter().map(|r| cols.iter().map(|&j| BigInt::from(r[j])).collect()).collect();
        let d: i64 = common::cofactor_det(&sub).try_into().unwrap();
        g = g.gcd(&d);
    }
    g
}

#[test]
fn smoothness_matches_unit_invariant_factors_on_corpus() {
    for (name, f) in corpus() {
        for cone in f.cones() {
            let snf = smith_normal_form(&f.cone_matrix(&cone));
            let unit = snf.invariant_factors.iter().all(One::is_one);
            assert_eq!(fan::cone_is_smooth(&f, &cone), unit, "{name} {cone:?}");
        }
    }
}

#[test]
fn sampled_points_lie_in_exactly_one_cone_interior() {
    for (name, f) in corpus() {
        let r = fan::completeness_report(&f, fan::DEFAULT_SAMPLES);
        assert!(r.is_complete(), "{name}: {r:?}");
        assert_eq!(r.samples, fan::DEFAULT_SAMPLES);
        assert_eq!(r.overlapping, 0, "{name}");
    }
}

#[test]
fn isolated_means_only_full_dimensional_cones_are_singular() {
    for (name, f) in corpus() {
        let r = fan::singularity_report(&f);
        let n = f.lattice_rank();
        let only_top = r.singular_cones().all(|c| c.cone.len() == n);
        assert_eq!(r.isolated, only_top, "{name}");
    }
}

#[test]
fn faces_of_terminal_cones_are_terminal() {
    for (name, f) in corpus() {
        for cone in f.cones() {
            if !fan::cone_is_terminal(&f, &cone, BUDGET).unwrap() {
                continue;
            }
            for mask in 1u32..(1 << cone.len()) - 1 {
                let face: Vec<usize> =
                    (0..cone.len()).filter(|i| mask >> i & 1 == 1).map(|i| cone[i]).collect();
                assert!(fan::cone_is_terminal(&f, &face, BUDGET).unwrap(), "{name} {face:?}");
            }
        }
    }
}

/// Brute force: scan a bounding box for lattice points `x = Σ t_i v_i` with
/// `t_i >= 0`, `Σ t_i <= 1`, other than 0 and the generators. Lower
/// dimensional cones are padded with unit vectors whose coefficients must
/// vanish.
fn terminal_by_box(rays: &[Vec<i64>]) -> bool {
    let n = rays[0].len();
    let k = rays.len();
    let mut full = rays.to_vec();
    for j in 0..n {
        if full.len() == n {
            break;
        }
        let mut e = vec![0i64; n];
        e[j] = 1;
        let mut trial = full.clone();
        trial.push(e);
        if IntMatrix::from_i64(&trial).rank() == trial.len() {
            full = trial;
        }
    }
    let m = IntMatrix::from_i64(&full).transpose();
    let lo: Vec<i64> = (0..n).map(|j| rays.iter().map(|r| r[j].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..n).map(|j| rays.iter().map(|r| r[j].max(0)).sum()).collect();
    let mut x = lo.clone();
    loop {
        let is_vertex = x.iter().all(|&c| c == 0) || rays.contains(&x);
        if !is_vertex {
            let target: Vec<BigRational> = x.iter().map(|&c| BigRational::from_integer(c.into())).collect();
            let t = toric_wci_core::exactmat::rational::solve(&m, &target).unwrap();
            let sum: BigRational = t[..k].iter().cloned().sum();
            let in_span = t[k..].iter().all(|c| c.is_zero());
            if in_span && t[..k].iter().all(|c| !c.is_negative()) && sum <= BigRational::one() {
                return false;
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                return true;
            }
            x[j] += 1;
            if x[j] <= hi[j] {
                break;
            }
            x[j] = lo[j];
            j += 1;
        }
    }
}

fn independent_cone(k: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 3), k).prop_filter_map("dependent", |rows| {
        let m = IntMatrix::from_i64(&rows);
        if m.rank() < rows.len() {
            return None;
        }
        let prim: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| {
                let g = r.iter().fold(0i64, |g, x| g.gcd(x));
                r.iter().map(|x| x / g).collect()
            })
            .collect();
        Some(prim)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn terminality_matches_box_scan((rays, k) in (1usize..=3).prop_flat_map(|k| (independent_cone(k), Just(k)))) {
        let f = Fan::new_unchecked(3, IntMatrix::from_i64(&rays), vec![(0..k).collect()]).unwrap();
        let fast = fan::cone_is_terminal(&f, &(0..k).collect::<Vec<_>>(), BUDGET).unwrap();
        prop_assert_eq!(fast, terminal_by_box(&rays), "{:?}", rays);
    }

    #[test]
    fn smoothness_matches_maximal_minors((rays, k) in (1usize..=3).prop_flat_map(|k| (independent_cone(k), Just(k)))) {
        let f = Fan::new_unchecked(3, IntMatrix::from_i64(&rays), vec![(0..k).collect()]).unwrap();
        let cone: Vec<usize> = (0..k).collect();
        prop_assert_eq!(fan::cone_is_smooth(&f, &cone), minors_gcd(&rays) == 1);
        prop_assert_eq!(fan::cone_multiplicity(&f, &cone), BigInt::from(minors_gcd(&rays)));
    }
}

#[test]
fn validation_reports_each_defect() {
    let has = |rays: &[[i64; 2]], cones: Vec<Vec<usize>>, pred: fn(&Violation) -> bool| {
        let f = Fan::new_unchecked(2, IntMatrix::from_i64(rays), cones).unwrap();
        let r = fan::validate(&f);
        assert!(r.violations.iter().any(pred), "{:?}", r.violations);
    };
    let p2 = [[1, 0], [0, 1], [-1, -1]];
    has(&p2, vec![], |v| matches!(v, Violation::NoCones));
    has(&[[2, 0], [0, 1], [-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]], |v| {
        matches!(v, Violation::NonPrimitiveRay(..))
    });
    has(&[[1, 0], [0, 1], [-1, -1], [1, 0]], vec![vec![0, 1], vec![1, 2], vec![2, 3]], |v| {
        matches!(v, Violation::DuplicateRay(..))
    });
    has(&[[1, 0], [0, 1], [-1, -1], [0, 0]], vec![vec![0, 1], vec![1, 2], vec![0, 2]], |v| {
        matches!(v, Violation::ZeroRay(..))
    });
    has(&p2, vec![vec![0, 1], vec![1, 2]], |v| matches!(v, Violation::RidgeCount { .. }));
    has(&p2, vec![vec![0, 1], vec![1, 2], vec![0, 5]], |v| {
        matches!(v, Violation::IndexOutOfRange { .. })
    });
    has(&[[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0], vec![4, 0]], |v| {
        matches!(v, Violation::BadIntersection(..))
    });
    assert!(matches!(
        Fan::from_i64(&[[1, 0], [0, 1]], vec![vec![0, 1]]),
        Err(Error::InvalidFan(_))
    ));
}

#[test]
fn terminal_budget_is_enforced() {
    let f = Fan::new_unchecked(3, IntMatrix::from_i64(&[[1, 0, 0], [0, 1, 0], [1, 1, 9]]), vec![vec![0, 1, 2]])
        .unwrap();
    assert!(matches!(fan::cone_is_terminal(&f, &[0, 1, 2], 4), Err(Error::BudgetExceeded { .. })));
    assert!(fan::cone_is_terminal(&f, &[0, 1, 2], 100).is_ok());
}

#[test]
fn f_vectors() {
    assert_eq!(common::kasprzyk().f_vector(), vec![1, 4, 6, 4]);
    assert_eq!(common::p1xp1().f_vector(), vec![1, 4, 4]);
    let r = fan::singularity_report(&common::p1xp1());
    assert!(r.is_smooth() && r.singular_codim.is_none());
}
