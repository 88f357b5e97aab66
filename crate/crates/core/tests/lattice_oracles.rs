//! Smith normal form, cokernels and element orders on random 4x4 integer
//! matrices, against determinantal divisors and adjugate arithmetic.

use eqper_core::lattice::{cokernel, element_order, kernel_basis, membership, snf, IntMatrix, Order};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M4 = [[i64; 4]; 4];

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

/// gcd of all k x k minors.
fn minor_gcd(m: &[Vec<i64>], k: usize) -> i64 {
    let rows = m.len();
    let cols = m[0].len();
    let mut g = 0i64;
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

fn rank(m: &[Vec<i64>]) -> usize {
    (1..=m.len().min(m[0].len())).rev().find(|&k| minor_gcd(m, k) != 0).unwrap_or(0)
}

fn random_matrix(rng: &mut ChaCha8Rng) -> M4 {
    let mut m = [[0i64; 4]; 4];
    for row in &mut m {
        for x in row.iter_mut() {
            *x = rng.gen_range(-5..=5);
        }
    }
    // a quarter of the samples are singular
    if rng.gen_ratio(1, 4) {
        for row in &mut m {
            row[3] = row[0] - row[1];
        }
    }
    m
}

fn as_rows(m: &M4) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut adj = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                .collect();
            adj[i][j] = if (i + j) % 2 == 0 { det(&minor) } else { -det(&minor) };
        }
    }
    adj
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let m = random_matrix(&mut rng);
        let rows = as_rows(&m);
        let im = IntMatrix::from_rows(&rows);
        let dec = snf(&im);
        assert_eq!(dec.u.mul(&im).unwrap().mul(&dec.v).unwrap(), dec.s);
        assert_eq!(dec.u.mul(&dec.u_inv).unwrap(), IntMatrix::identity(4));
        assert_eq!(dec.v.mul(&dec.v_inv).unwrap(), IntMatrix::identity(4));
        let diag = dec.diagonal();
        let mut prev = 1i64;
        for k in 1..=4 {
            let dk = minor_gcd(&rows, k);
            let want = if dk == 0 { 0 } else { dk / prev };
            assert_eq!(diag[k - 1], BigInt::from(want), "{m:?}");
            if dk != 0 {
                prev = dk;
            }
        }
        let q = cokernel(&im);
        let r = rank(&rows);
        assert_eq!(q.free_rank, 4 - r);
        assert_eq!(q.torsion_order(), BigInt::from(minor_gcd(&rows, r).abs().max(1)));
        assert_eq!(kernel_basis(&im).cols(), 4 - r);
        assert!(im.mul(&kernel_basis(&im)).unwrap().is_zero());
    }
}

#[test]
fn element_orders_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd);
    for _ in 0..500 {
        let m = random_matrix(&mut rng);
        let rows = as_rows(&m);
        let im = IntMatrix::from_rows(&rows);
        let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
        let got = element_order(&im, &big(&v)).unwrap();
        let d = det(&rows);
        if d != 0 {
            // n v in the lattice iff adj(M) (n v) = 0 mod det
            let adj = adjugate(&rows);
            let in_lattice = |n: i64| {
                adj.iter()
                    .all(|r| (r.iter().zip(&v).map(|(a, x)| a * x).sum::<i64>() * n) % d == 0)
            };
            let brute = (1..=64).find(|&n| in_lattice(n));
            match brute {
                Some(n) => assert_eq!(got, Order::Finite(BigInt::from(n)), "{m:?} {v:?}"),
                None => assert!(got.finite().unwrap() > &BigInt::from(64)),
            }
        } else {
            let mut aug = rows.clone();
            for (r, x) in aug.iter_mut().zip(&v) {
                r.push(*x);
            }
            if rank(&aug) > rank(&rows) {
                assert_eq!(got, Order::Infinite, "{m:?} {v:?}");
                continue;
            }
            let n = got.finite().expect("v lies in the rational span");
            let scaled: Vec<BigInt> = big(&v).iter().map(|x| x * n).collect();
            let x = membership(&im, &scaled).unwrap().expect("n v is a lattice point");
            assert_eq!(im.mul_vec(&x).unwrap(), scaled);
            let top = cokernel(&im).torsion.last().cloned().unwrap_or(BigInt::from(1));
            assert!(top.is_multiple_of(n));
            for k in 1..n.try_into().unwrap() {
                let kv: Vec<BigInt> = big(&v).iter().map(|x| x * k).collect();
                assert!(membership(&im, &kv).unwrap().is_none());
            }
        }
    }
}

#[test]
fn membership_witnesses_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let m = random_matrix(&mut rng);
        let im = IntMatrix::from_rows(&as_rows(&m));
        let x: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
        let target = im.mul_vec(&big(&x)).unwrap();
        let w = membership(&im, &target).unwrap().expect("image point");
        assert_eq!(im.mul_vec(&w).unwrap(), target);
    }
}

#[test]
fn smith_round_trip_and_cokernel_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let m = random_matrix(&mut rng);
        let im = IntMatrix::from_rows(&as_rows(&m));
        let dec = snf(&im);
        let back = dec.u_inv.mul(&dec.s).unwrap().mul(&dec.v_inv).unwrap();
        assert_eq!(back, im);
        let q = cokernel(&im);
        let mut perm = [0usize, 1, 2, 3];
        for i in (1..4).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        assert_eq!(cokernel(&im.select_columns(&perm)), q);
        // a random unimodular column operation: add a multiple of one column to another
        let (a, b) = (rng.gen_range(0..4), rng.gen_range(0..4));
        if a != b {
            let mut rows = as_rows(&m);
            let k = rng.gen_range(-3..=3);
            for r in &mut rows {
                r[a] += k * r[b];
            }
            assert_eq!(cokernel(&IntMatrix::from_rows(&rows)), q);
        }
    }
}
