//! Property tests for the tensor algebra, the solver primitives, the dual,
//! and the imaging pipeline.

use proptest::prelude::*;

use sc2d_core::dict::{build_cache, dual_value, recover_dhat};
use sc2d_core::{
    dft3, idft3, psnr, soft_threshold, ssim, tprod, tprod_full, BandImage, PatchGrid, Tensor3,
};

/// Strategy for a tensor with the given extent bounds and entries in ±1.
fn tensor(
    m_max: usize,
    n_max: usize,
    k_max: usize,
) -> impl Strategy<Value = Tensor3> {
    (1..=m_max, 1..=n_max, 1..=k_max).prop_flat_map(|(m, n, k)| {
        proptest::collection::vec(-1.0f64..1.0, m * n * k)
            .prop_map(move |data| Tensor3::from_data(m, n, k, data).unwrap())
    })
}

/// A conformable `(A, B)` pair for the tensor product.
fn tprod_pair(
    m_max: usize,
    r_max: usize,
    n_max: usize,
    k_max: usize,
) -> impl Strategy<Value = (Tensor3, Tensor3)> {
    (1..=m_max, 1..=r_max, 1..=n_max, 1..=k_max).prop_flat_map(|(m, r, n, k)| {
        let a = proptest::collection::vec(-1.0f64..1.0, m * r * k)
            .prop_map(move |data| Tensor3::from_data(m, r, k, data).unwrap());
        let b = proptest::collection::vec(-1.0f64..1.0, r * n * k)
            .prop_map(move |data| Tensor3::from_data(r, n, k, data).unwrap());
        (a, b)
    })
}

fn rel_err(result: &Tensor3, expect: &Tensor3) -> f64 {
    result.sub(expect).unwrap().fro_norm() / expect.fro_norm().max(1e-12)
}

proptest! {
    #[test]
    fn tprod_identity_both_sides(b in tensor(6, 6, 8)) {
        let id = Tensor3::identity(b.m(), b.k());
        let left = tprod(&id, &b).unwrap();
        prop_assert!(rel_err(&left, &b) <= 1e-12);

        let id_r = Tensor3::identity(b.n(), b.k());
        let right = tprod(&b, &id_r).unwrap();
        prop_assert!(rel_err(&right, &b) <= 1e-12);
    }

    #[test]
    fn circulant_expansion_equivalence((a, b) in tprod_pair(6, 6, 6, 8)) {
        let prod = tprod(&a, &b).unwrap();
        let dense = a.circulant_unfold().mul(&b.unfold());
        let dense_t = Tensor3::fold(&dense, a.k()).unwrap();
        prop_assert!(rel_err(&prod, &dense_t) <= 1e-10);
    }

    #[test]
    fn associativity(
        (dims, da, db, dc) in (1usize..=4, 1usize..=4, 1usize..=4, 1usize..=4, 1usize..=6)
            .prop_flat_map(|(m, r, s, n, k)| {
                (
                    Just((m, r, s, n, k)),
                    proptest::collection::vec(-1.0f64..1.0, m * r * k),
                    proptest::collection::vec(-1.0f64..1.0, r * s * k),
                    proptest::collection::vec(-1.0f64..1.0, s * n * k),
                )
            })
    ) {
        let (m, r, s, n, k) = dims;
        let a = Tensor3::from_data(m, r, k, da).unwrap();
        let b = Tensor3::from_data(r, s, k, db).unwrap();
        let c = Tensor3::from_data(s, n, k, dc).unwrap();
        let left = tprod(&tprod(&a, &b).unwrap(), &c).unwrap();
        let right = tprod(&a, &tprod(&b, &c).unwrap()).unwrap();
        let scale = right.fro_norm().max(1.0);
        prop_assert!(left.sub(&right).unwrap().fro_norm() / scale <= 1e-9);
    }

    #[test]
    fn transpose_anti_homomorphism((a, b) in tprod_pair(5, 5, 5, 7)) {
        let left = tprod(&a, &b).unwrap().transpose_t();
        let right = tprod(&b.transpose_t(), &a.transpose_t()).unwrap();
        let scale = right.fro_norm().max(1.0);
        prop_assert!(left.sub(&right).unwrap().fro_norm() / scale <= 1e-10);
    }

    #[test]
    fn transpose_involution(x in tensor(6, 6, 8)) {
        prop_assert_eq!(x.transpose_t().transpose_t(), x);
    }

    #[test]
    fn shifting_invariance(d in tensor(6, 1, 8)) {
        // coding an atom against a delta tube shifts its slices
        let k = d.k();
        for pos in 0..k {
            let mut c = Tensor3::zeros(1, 1, k);
            c.set(0, 0, pos, 1.0);
            let coded = tprod(&d, &c).unwrap();
            let expect = d.shift3(pos as i64);
            let err = coded.sub(&expect).unwrap().fro_norm();
            prop_assert!(err <= 1e-10 * expect.fro_norm().max(1.0));
        }
    }

    #[test]
    fn parseval(x in tensor(6, 6, 8)) {
        let lhs = x.fro_norm_sq();
        let rhs = dft3(&x).fro_norm_sq() / x.k() as f64;
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1.0));
    }

    #[test]
    fn transform_round_trip(x in tensor(6, 6, 8)) {
        let back = idft3(&dft3(&x)).unwrap();
        prop_assert!(rel_err(&back, &x) <= 1e-12);
    }

    #[test]
    fn spectrum_symmetry(x in tensor(5, 5, 8)) {
        prop_assert!(dft3(&x).symmetry_deviation() <= 1e-12);
    }

    #[test]
    fn half_spectrum_matches_full((a, b) in tprod_pair(4, 4, 4, 8)) {
        let half = tprod(&a, &b).unwrap();
        let full = tprod_full(&a, &b).unwrap();
        let scale = full.fro_norm().max(1.0);
        prop_assert!(half.sub(&full).unwrap().fro_norm() / scale <= 1e-12);
    }

    #[test]
    fn unfold_fold_round_trip(x in tensor(6, 6, 8)) {
        prop_assert_eq!(Tensor3::fold(&x.unfold(), x.k()).unwrap(), x);
    }

    #[test]
    fn soft_threshold_solves_scalar_prox(
        t in tensor(4, 4, 4),
        tau in 0.0f64..0.5,
    ) {
        // each output entry must minimize ½(z − t)² + τ|z|; compare against
        // a grid search over candidate minimizers
        let s = soft_threshold(&t, tau);
        for (out, inp) in s.data().iter().zip(t.data().iter()) {
            let objective = |z: f64| 0.5 * (z - inp) * (z - inp) + tau * z.abs();
            let mut best = 0.0f64;
            let mut best_val = objective(0.0);
            let mut z = -1.5;
            while z <= 1.5 {
                let v = objective(z);
                if v < best_val {
                    best_val = v;
                    best = z;
                }
                z += 1e-4;
            }
            prop_assert!((out - best).abs() <= 2e-4, "prox {out} vs grid {best}");
        }
    }

    #[test]
    fn patch_round_trip_on_integer_images(
        (h, w, bands, p, stride) in (5usize..=12, 5usize..=12, 1usize..=3, 2usize..=4, 1usize..=2),
        seed in 0u64..1000,
    ) {
        prop_assume!(p <= h && p <= w);
        let mut img = BandImage::zeros(h, w, bands);
        let mut state = seed | 1;
        for v in img.data_mut() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            *v = (state % 256) as f64;
        }
        let grid = PatchGrid::new(h, w, bands, p, stride).unwrap();
        let t = grid.extract(&img).unwrap();
        let (back, _) = grid.reconstruct(&t).unwrap();
        // every covered pixel averages identical integer contributions
        let rows = (h - p) / stride + 1;
        let cols = (w - p) / stride + 1;
        let y_max = (rows - 1) * stride + p;
        let x_max = (cols - 1) * stride + p;
        for band in 0..bands {
            for y in 0..y_max {
                for x in 0..x_max {
                    prop_assert_eq!(back.get(y, x, band), img.get(y, x, band));
                }
            }
        }
    }

    #[test]
    fn metric_axioms(seed in 0u64..1000) {
        let mut a = BandImage::zeros(16, 16, 2);
        let mut b = BandImage::zeros(16, 16, 2);
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 256) as f64
        };
        for v in a.data_mut() {
            *v = next();
        }
        for v in b.data_mut() {
            *v = next();
        }
        prop_assert!((psnr(&a, &b).unwrap() - psnr(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((ssim(&a, &b).unwrap() - ssim(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((ssim(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let s = ssim(&a, &b).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
    }

    #[test]
    fn dual_concave_along_segments(
        (x, b) in (2usize..=4, 2usize..=4, 3usize..=8, 1usize..=4)
            .prop_flat_map(|(m, r, n, k)| {
                (
                    proptest::collection::vec(-1.0f64..1.0, m * n * k)
                        .prop_map(move |d| Tensor3::from_data(m, n, k, d).unwrap()),
                    proptest::collection::vec(-1.0f64..1.0, r * n * k)
                        .prop_map(move |d| Tensor3::from_data(r, n, k, d).unwrap()),
                )
            }),
        t in 0.1f64..0.9,
    ) {
        let cache = build_cache(&x, &b).unwrap();
        let r = b.m();
        let l0: Vec<f64> = (0..r).map(|j| 0.2 + 0.1 * j as f64).collect();
        let l1: Vec<f64> = (0..r).map(|j| 1.5 - 0.1 * j as f64).collect();
        let mid: Vec<f64> = l0
            .iter()
            .zip(l1.iter())
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        let v0 = dual_value(&cache, &l0).unwrap();
        let v1 = dual_value(&cache, &l1).unwrap();
        let vm = dual_value(&cache, &mid).unwrap();
        let chord = (1.0 - t) * v0 + t * v1;
        prop_assert!(
            vm >= chord - 1e-9 * chord.abs().max(1.0),
            "midpoint {vm} below chord {chord}"
        );
    }

    #[test]
    fn recovered_dictionary_spectrum_stays_symmetric(
        (x, b) in (2usize..=4, 2usize..=4, 3usize..=8, 1usize..=6)
            .prop_flat_map(|(m, r, n, k)| {
                (
                    proptest::collection::vec(-1.0f64..1.0, m * n * k)
                        .prop_map(move |d| Tensor3::from_data(m, n, k, d).unwrap()),
                    proptest::collection::vec(-1.0f64..1.0, r * n * k)
                        .prop_map(move |d| Tensor3::from_data(r, n, k, d).unwrap()),
                )
            }),
    ) {
        let cache = build_cache(&x, &b).unwrap();
        let lambda = vec![0.5; b.m()];
        let fd = recover_dhat(&cache, &lambda).unwrap();
        prop_assert!(fd.symmetry_deviation() <= 1e-10);
        let d = idft3(&fd).unwrap();
        prop_assert!(d.is_finite());
    }
}
