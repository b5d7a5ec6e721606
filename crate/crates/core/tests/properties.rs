use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_hilbert::hsiso::{self, AntiLinearOp};
use padic_hilbert::spaces::{ip, sup_norm};
use padic_hilbert::tensor::proj_norm;
use padic_hilbert::{sample, FieldConfig, MuKind};

fn field() -> impl Strategy<Value = FieldConfig> {
    (prop::sample::select(vec![5u32, 7, 13]), prop::sample::select(MuKind::ALL.to_vec()))
        .prop_map(|(p, k)| FieldConfig::new(p, k, 32).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strong_triangle_and_multiplicativity(cfg in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::ext(cfg, &mut rng, 4);
        let y = sample::ext(cfg, &mut rng, 4);
        let (nx, ny) = (x.abs().unwrap(), y.abs().unwrap());
        prop_assert!((&x + &y).abs().unwrap() <= nx.max(ny));
        prop_assert_eq!((&x * &y).abs().unwrap(), nx * ny);
        if nx != ny {
            prop_assert_eq!((&x + &y).abs().unwrap(), nx.max(ny));
        }
    }

    #[test]
    fn inner_product_is_hermitian_sesquilinear(cfg in field(), seed in any::<u64>(), d in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::vector(cfg, &mut rng, d, 3);
        let y = sample::vector(cfg, &mut rng, d, 3);
        let z = sample::vector(cfg, &mut rng, d, 3);
        let a = sample::ext(cfg, &mut rng, 3);
        prop_assert!(ip(&x, &y).unwrap().eq_at_precision(&ip(&y, &x).unwrap().conj()));
        prop_assert!(ip(&x, &y.scale(&a)).unwrap().eq_at_precision(&(&a * &ip(&x, &y).unwrap())));
        prop_assert!(ip(&x.scale(&a), &y).unwrap().eq_at_precision(&(&a.conj() * &ip(&x, &y).unwrap())));
        let lhs = ip(&x, &y.add(&z).unwrap()).unwrap();
        prop_assert!(lhs.eq_at_precision(&(&ip(&x, &y).unwrap() + &ip(&x, &z).unwrap())));
    }

    #[test]
    fn conjugations_are_isometric_involutions(cfg in field(), seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = hsiso::random_unitary(cfg, d, &mut rng).unwrap().columns();
        let x = sample::vector(cfg, &mut rng, d, 3);
        for z in [AntiLinearOp::j0(cfg, d), hsiso::conjugation_for_basis(&psi).unwrap()] {
            prop_assert!(z.is_involutive().unwrap());
            let zx = z.apply(&x).unwrap();
            prop_assert!(z.apply(&zx).unwrap().eq_at_precision(&x));
            prop_assert_eq!(sup_norm(&zx).unwrap(), sup_norm(&x).unwrap());
        }
    }

    #[test]
    fn adjoint_is_an_involution(cfg in field(), seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = sample::matrix(cfg, &mut rng, r, c, 3);
        let bss = b.adjoint().unwrap().adjoint().unwrap();
        prop_assert!(bss.eq_at_precision(&b));
        prop_assert_eq!(b.adjoint().unwrap().op_norm().unwrap(), b.op_norm().unwrap());
    }

    #[test]
    fn trace_class_iso_is_isometric(cfg in field(), seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sample::matrix(cfg, &mut rng, r, c, 3);
        let it = hsiso::iso_i(&t).unwrap();
        prop_assert_eq!(proj_norm(&it).unwrap(), t.op_norm().unwrap());
        prop_assert!(hsiso::iso_i_star(&it).unwrap().eq_at_precision(&t));
    }

    #[test]
    fn decomposition_parts_are_invariant(cfg in field(), seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = hsiso::random_unitary(cfg, d, &mut rng).unwrap().columns();
        let z = hsiso::conjugation_for_basis(&psi).unwrap();
        let x = sample::vector(cfg, &mut rng, d, 3);
        let (c1, c2) = hsiso::z_invariant_decomposition(&z, &x).unwrap();
        prop_assert!(z.apply(&c1).unwrap().eq_at_precision(&c1));
        prop_assert!(z.apply(&c2).unwrap().eq_at_precision(&c2));
        prop_assert!(hsiso::reconstruct(&c1, &c2).unwrap().eq_at_precision(&x));
    }
}
