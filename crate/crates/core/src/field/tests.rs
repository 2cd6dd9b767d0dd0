use super::ops::{is_irreducible, is_irreducible_bruteforce, BaseOps};
use super::*;
use num_bigint::BigUint;
use proptest::prelude::*;

fn f4() -> Arc<FieldCtx> {
    FieldCtx::galois(2, 2).unwrap()
}

#[test]
fn prime_fields() {
    let f2 = FieldCtx::prime(2).unwrap();
    assert_eq!(f2.enumerate(DEFAULT_BUDGET).unwrap().count(), 2);
    let f3 = FieldCtx::prime(3).unwrap();
    let one = f3.one();
    let two = f3.add(&one, &one).unwrap();
    assert!(f3.add(&one, &two).unwrap().is_zero());
    let err = FieldCtx::prime(4).unwrap_err();
    assert_eq!(err.to_string(), "4 is not prime, divisor 2");
    assert!(matches!(
        FieldCtx::prime(1009),
        Err(Error::PrimeTooLarge { .. })
    ));
}

#[test]
fn canonical_moduli() {
    let f2 = FieldCtx::prime(2).unwrap();
    assert_eq!(FieldCtx::extend(&f2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    let f3 = FieldCtx::prime(3).unwrap();
    assert_eq!(FieldCtx::extend(&f3, 2).unwrap().modulus(), &[1, 0, 1]);
    assert_eq!(f4().modulus(), &[1, 1, 1]);
    let lin = FieldCtx::extend(&f3, 1).unwrap();
    assert_eq!(lin.modulus(), &[0, 1]);
    assert_eq!(lin.size(), 3);
}

/// Least modulus found independently: scan candidates in order and keep the
/// first one without a monic factor of degree up to n/2.
fn least_by_factor_search(base: &Arc<FieldCtx>, n: usize) -> Vec<u32> {
    let ops = if base.base().is_none() {
        BaseOps::Prime { p: base.p() }
    } else {
        BaseOps::Nested(Arc::clone(base))
    };
    let b = base.size();
    for idx in 0..b.pow(n as u32) {
        let mut f = vec![0u32; n + 1];
        let mut m = idx;
        for c in f.iter_mut().take(n) {
            *c = (m % b) as u32;
            m /= b;
        }
        f[n] = 1;
        if is_irreducible_bruteforce(&ops, &f, b) {
            return f;
        }
    }
    unreachable!()
}

#[test]
fn moduli_match_bruteforce_search() {
    for (p, n) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2)] {
        let fp = FieldCtx::prime(p).unwrap();
        let ext = FieldCtx::extend(&fp, n).unwrap();
        assert_eq!(ext.modulus(), least_by_factor_search(&fp, n), "p={p} n={n}");
    }
    let f4 = f4();
    for n in [2, 3] {
        let ext = FieldCtx::extend(&f4, n).unwrap();
        assert_eq!(ext.modulus(), least_by_factor_search(&f4, n), "F_4 n={n}");
    }
    let f9 = FieldCtx::galois(3, 2).unwrap();
    let ext = FieldCtx::extend(&f9, 2).unwrap();
    assert_eq!(ext.modulus(), least_by_factor_search(&f9, 2));
}

#[test]
fn irreducibility_tests_agree() {
    let ops = BaseOps::Prime { p: 3 };
    for idx in 0..81u32 {
        let mut f: Vec<u32> = (0..4).map(|k| (idx / 3u32.pow(k)) % 3).collect();
        f.push(1);
        assert_eq!(
            is_irreducible(&ops, &f, 3),
            is_irreducible_bruteforce(&ops, &f, 3),
            "{f:?}"
        );
    }
}

#[test]
fn f4_arithmetic() {
    let f = f4();
    let t = f.generator();
    let tt = f.mul(&t, &t).unwrap();
    assert_eq!(tt.coeffs(), &[1, 1]);
    assert_eq!(f.frobenius_iter(&t, 1).unwrap(), tt);
    assert!(f.inverse(&f.one()).unwrap().is_one());
    assert_eq!(f.inverse(&f.zero()), Err(Error::InverseOfZero));
    let zero = f.zero();
    assert!(f.pow(&zero, &BigUint::from(0u32)).unwrap().is_one());
    assert!(f.frobenius_iter(&zero, 5).unwrap().is_zero());
    let order: Vec<u64> = f
        .enumerate(DEFAULT_BUDGET)
        .unwrap()
        .map(|e| f.encoding(&e))
        .collect();
    assert_eq!(order, vec![0, 1, 2, 3]);
    assert_eq!(f.render(&tt), "1,1");
}

#[test]
fn trace_examples() {
    let f = f4();
    assert!(f.trace_vanishes(&f.one(), 1).unwrap());
    assert!(!f.trace_vanishes(&f.generator(), 1).unwrap());
    let f2 = FieldCtx::prime(2).unwrap();
    assert!(!f2.trace_vanishes(&f2.one(), 1).unwrap());
    assert_eq!(
        f.trace_vanishes(&f.one(), 3),
        Err(Error::DegreeMismatch { g: 3, m: 2 })
    );
}

#[test]
fn context_mismatch() {
    let a = f4().one();
    let f9 = FieldCtx::galois(3, 2).unwrap();
    assert_eq!(f9.add(&a, &f9.one()), Err(Error::ContextMismatch));
}

#[test]
fn determinism() {
    let a = FieldCtx::extend(&f4(), 3).unwrap();
    let b = FieldCtx::extend(&f4(), 3).unwrap();
    assert_eq!(a.modulus(), b.modulus());
    assert_eq!(a.id(), b.id());
    assert!(*a == *b);
}

#[test]
fn budget_refusal() {
    let f = FieldCtx::galois(2, 10).unwrap();
    let refused = matches!(
        f.enumerate(100),
        Err(Error::BudgetExceeded { required: 1024, .. })
    );
    assert!(refused);
}

#[test]
fn descriptions() {
    assert_eq!(FieldCtx::from_description("4").unwrap().size(), 4);
    assert_eq!(FieldCtx::from_description("3^2").unwrap().size(), 9);
    assert_eq!(FieldCtx::from_description("9").unwrap().abs_degree(), 2);
    assert!(FieldCtx::from_description("6").is_err());
}

#[test]
fn flat_digits_roundtrip() {
    let f = FieldCtx::extend(&FieldCtx::galois(3, 2).unwrap(), 2).unwrap();
    for e in f.enumerate(DEFAULT_BUDGET).unwrap() {
        let d = f.flat_digits(&e);
        assert_eq!(f.from_flat_digits(&d).unwrap(), e);
    }
}

/// Towers whose trace-surjectivity is checked exhaustively, along with
/// every admissible `g`.
fn small_towers() -> Vec<Arc<FieldCtx>> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        for s in 1..=4usize {
            let base = FieldCtx::galois(p, s).unwrap();
            for n in 1..=4usize {
                if (p as u128).pow((s * n) as u32) > 3u128.pow(8) {
                    continue;
                }
                out.push(if n == 1 {
                    Arc::clone(&base)
                } else {
                    FieldCtx::extend(&base, n).unwrap()
                });
            }
        }
    }
    out
}

#[test]
fn trace_kernel_sizes() {
    for f in small_towers() {
        let m = f.abs_degree();
        for g in (1..=m).filter(|g| m % g == 0) {
            let count = f
                .enumerate(DEFAULT_BUDGET)
                .unwrap()
                .filter(|c| f.trace_vanishes(c, g).unwrap())
                .count() as u64;
            assert_eq!(count, (f.p() as u64).pow((m - g) as u32), "{f:?} g={g}");
        }
    }
}

#[test]
fn trace_kernel_matches_direct_trace() {
    for f in small_towers() {
        let m = f.abs_degree();
        for g in (1..=m).filter(|g| m % g == 0) {
            let kernel = TraceKernel::new(&f, g).unwrap();
            assert_eq!(kernel.rank(), g);
            let mut scratch = Vec::new();
            for c in f.enumerate(DEFAULT_BUDGET).unwrap() {
                assert_eq!(
                    kernel.vanishes(c.coeffs(), &mut scratch),
                    f.trace_vanishes(&c, g).unwrap()
                );
            }
        }
    }
}

fn tower_strategy() -> impl Strategy<Value = Arc<FieldCtx>> {
    prop_oneof![
        Just((2u64, 1usize, 1usize)),
        Just((2, 2, 1)),
        Just((2, 2, 3)),
        Just((3, 1, 4)),
        Just((3, 2, 2)),
        Just((5, 2, 1)),
        Just((7, 1, 3)),
        Just((2, 3, 2)),
    ]
    .prop_map(|(p, s, n)| {
        let base = FieldCtx::galois(p, s).unwrap();
        if n == 1 {
            base
        } else {
            FieldCtx::extend(&base, n).unwrap()
        }
    })
}

proptest! {
    #[test]
    fn field_axioms(f in tower_strategy(), seeds in prop::array::uniform3(any::<u64>())) {
        let [a, b, c] = seeds.map(|x| f.from_encoding(x % f.size()));
        prop_assert_eq!(f.add(&a, &b)?, f.add(&b, &a)?);
        prop_assert_eq!(f.mul(&a, &b)?, f.mul(&b, &a)?);
        prop_assert_eq!(f.mul(&f.mul(&a, &b)?, &c)?, f.mul(&a, &f.mul(&b, &c)?)?);
        prop_assert_eq!(f.add(&f.add(&a, &b)?, &c)?, f.add(&a, &f.add(&b, &c)?)?);
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c)?)?,
            f.add(&f.mul(&a, &b)?, &f.mul(&a, &c)?)?
        );
        prop_assert!(f.add(&a, &f.neg(&a)?)?.is_zero());
        prop_assert_eq!(f.sub(&a, &b)?, f.add(&a, &f.neg(&b)?)?);
        if !a.is_zero() {
            prop_assert!(f.mul(&a, &f.inverse(&a)?)?.is_one());
        }
    }

    #[test]
    fn frobenius_is_a_ring_map(f in tower_strategy(), x in any::<u64>(), y in any::<u64>()) {
        let a = f.from_encoding(x % f.size());
        let b = f.from_encoding(y % f.size());
        let fr = |e: &FieldElement| f.frobenius_iter(e, 1).unwrap();
        prop_assert_eq!(fr(&f.add(&a, &b)?), f.add(&fr(&a), &fr(&b))?);
        prop_assert_eq!(fr(&f.mul(&a, &b)?), f.mul(&fr(&a), &fr(&b))?);
        prop_assert_eq!(f.frobenius_iter(&a, f.abs_degree())?, a.clone());
        prop_assert_eq!(fr(&a), f.pow_u64(&a, f.p() as u64)?);
    }

    #[test]
    fn pow_matches_repeated_multiplication(f in tower_strategy(), x in any::<u64>(), e in 0u64..40) {
        let a = f.from_encoding(x % f.size());
        let mut acc = f.one();
        for _ in 0..e {
            acc = f.mul(&acc, &a)?;
        }
        prop_assert_eq!(f.pow_u64(&a, e)?, acc);
    }
}
