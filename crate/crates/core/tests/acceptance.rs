//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. All comparisons are exact integer or cyclotomic
//! equalities; the only tolerances are the wall-clock budgets below.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use eqper_core::chartab::{dixon_character_table, load_table, table_for, CharacterTable, ClassDescriptor, TableDocument};
use eqper_core::cyclo::Cyc;
use eqper_core::grp::Builtin;
use eqper_core::lattice::{cokernel, element_order, image_basis, kernel_basis, snf, IntMatrix, Order};
use eqper_core::periodic::{
    certify, euler_quotient, factor_through_image, gamma, j_point_order, j_quotient_order, karoubi_rank, mult_matrix,
    predicate_talpha, talpha_order, CertFlavor,
};
use eqper_core::repring::{frobenius_schur, gram_matrix, parse_rep_expr, real_structure, Flavor, FlavoredRep, VirtualChar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00e9_0e12;
const CRITERION_ONE_BUDGET: Duration = Duration::from_secs(1);
const TOTAL_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn table(b: Builtin) -> Arc<CharacterTable> {
    table_for(&Arc::new(b.build().unwrap())).unwrap()
}

fn small_tables() -> Vec<Arc<CharacterTable>> {
    Builtin::catalog()
        .into_iter()
        .filter(|b| b.build().unwrap().order() <= 24)
        .map(table)
        .collect()
}

fn ex(t: &Arc<CharacterTable>, s: &str) -> VirtualChar {
    parse_rep_expr(s, t).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn fin(n: i64) -> Order {
    Order::Finite(n.into())
}

/// Restricts a square matrix in canonical row order to the named basis.
fn in_basis(t: &CharacterTable, m: &IntMatrix, labels: &[&str]) -> IntMatrix {
    let idx: Vec<usize> = labels.iter().map(|l| t.resolve(l).unwrap()).collect();
    let mut out = IntMatrix::zeros(idx.len(), idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out[(a, b)] = m[(i, j)].clone();
        }
    }
    out
}

fn sigma3() -> Outcome {
    let t = table(Builtin::Symmetric(3));
    let lam = ex(&t, "lambda");
    ensure!(lam.tensor(&lam).unwrap() == ex(&t, "1+sigma+lambda"), "lambda^2 = {}", lam.tensor(&lam).unwrap());
    let e = ex(&t, "lambda_C").euler_class().unwrap();
    ensure!(e == ex(&t, "1-lambda_C+sigma_C"), "e_lambda = {e}");
    let rank = karoubi_rank(&lam, &VirtualChar::zero(&t), Flavor::Real).unwrap();
    ensure!(rank == 1, "karoubi rank {rank}");

    let basis = ["chi0", "sigma", "lambda"];
    let full = mult_matrix(&e).unwrap();
    let img = image_basis(&in_basis(&t, &full, &basis));
    let col = IntMatrix::from_rows(&[vec![1], vec![1], vec![-1]]);
    let neg = IntMatrix::from_rows(&[vec![-1], vec![-1], vec![1]]);
    ensure!(img == col || img == neg, "image basis {img:?}");
    let f = factor_through_image(&in_basis(&t, &full, &basis), Some(1)).unwrap();
    let row = IntMatrix::from_rows(&[vec![1, 1, -1]]);
    let neg_row = IntMatrix::from_rows(&[vec![-1, -1, 1]]);
    ensure!(f.applicable, "rank {} is not 1", f.rank);
    ensure!(
        (f.m == col && f.n == row) || (f.m == neg && f.n == neg_row),
        "M = {:?}, N = {:?}",
        f.m,
        f.n
    );

    let alpha = ex(&t, "lambda_C-1-sigma_C");
    let lc = ex(&t, "lambda_C");
    let o1 = talpha_order(&euler_quotient(&lc, 1).unwrap(), &alpha).unwrap();
    let o2 = talpha_order(&euler_quotient(&lc, 2).unwrap(), &alpha).unwrap();
    ensure!(o1 == fin(1) && o2 == fin(3), "orders {o1}, {o2}");
    Ok("products, e_lambda, rank 1, M and N, orders 1 and 3".into())
}

fn quaternion() -> Outcome {
    let t = table(Builtin::Quaternion8);
    let h = ex(&t, "H");
    ensure!(h.tensor(&h).unwrap() == ex(&t, "1+sigma1+sigma2+sigma3"), "H^2");
    for s in ["sigma1", "sigma2", "sigma3"] {
        ensure!(ex(&t, s).tensor(&h).unwrap() == h, "{s} H != H");
    }
    let e = h.euler_class().unwrap();
    ensure!(e == ex(&t, "2-H"), "e_H = {e}");
    let fs = frobenius_schur(&t, t.resolve("H").unwrap());
    ensure!(fs == -1, "FS(H) = {fs}");

    let ro: BTreeSet<Vec<BigInt>> = real_structure(&t).ro_basis(&t).iter().map(|v| v.coords().to_vec()).collect();
    let want: BTreeSet<Vec<BigInt>> = ["1", "sigma1", "sigma2", "sigma3", "2*H"]
        .iter()
        .map(|s| ex(&t, s).coords().to_vec())
        .collect();
    ensure!(ro == want, "RO basis {ro:?}");

    let a = in_basis(&t, &mult_matrix(&e).unwrap(), &["chi0", "sigma1", "sigma2", "sigma3", "H"]);
    let expect = IntMatrix::from_rows(&[
        vec![2, 0, 0, 0, -1],
        vec![0, 2, 0, 0, -1],
        vec![0, 0, 2, 0, -1],
        vec![0, 0, 0, 2, -1],
        vec![-1, -1, -1, -1, 2],
    ]);
    ensure!(a == expect, "A = {a:?}");
    ensure!(t.resolve("chi0") == Some(0), "trivial row is not first");
    let canonical = mult_matrix(&e).unwrap();
    ensure!(canonical == expect, "A in canonical order = {canonical:?}");
    Ok("H^2, e_H = 2 - H, FS(H) = -1, RO basis, matrix A".into())
}

fn roots(n: u32, ks: &[i64]) -> Cyc {
    Cyc::reduce(ks.iter().map(|&k| (k, BigRational::one())), n)
}

fn frobenius21() -> Outcome {
    let b = Builtin::SemidirectCyclic { m: 7, k: 3, r: 2 };
    let g = Arc::new(b.build().unwrap());
    let one = || Cyc::from_int(1, 1);
    let int = |n| Cyc::from_int(n, 1);
    let (p, q) = (roots(7, &[3, 5, 6]), roots(7, &[1, 2, 4]));
    let z = |k| Cyc::root(3, k);
    // C(e), C(x), C(x^3), C(y), C(y^2) as displayed
    let doc = TableDocument {
        classes: [(1, 1), (7, 3), (7, 3), (3, 7), (3, 7)]
            .iter()
            .map(|&(rep_order, size)| ClassDescriptor { rep_order, size })
            .collect(),
        chars: vec![
            vec![one(), one(), one(), one(), one()],
            vec![one(), one(), one(), z(2), z(1)],
            vec![one(), one(), one(), z(1), z(2)],
            vec![int(3), p.clone(), q.clone(), int(0), int(0)],
            vec![int(3), q, p, int(0), int(0)],
        ],
    };
    let displayed = load_table(g.clone(), &doc).map_err(|e| format!("displayed table rejected: {e}"))?;
    let computed = dixon_character_table(g).unwrap();
    ensure!(displayed.rows() == computed.rows(), "tables differ after canonical ordering");

    let t = table(b);
    let rho = ex(&t, "rho");
    let checks = [
        (ex(&t, "omega").tensor(&rho).unwrap(), "rho"),
        (ex(&t, "omegabar").tensor(&rho).unwrap(), "rho"),
        (rho.tensor(&rho).unwrap(), "rho+2*rhobar"),
        (rho.tensor(&ex(&t, "rhobar")).unwrap(), "1+omega+omegabar+rho+rhobar"),
        (rho.exterior(2).unwrap(), "rhobar"),
        (rho.euler_class().unwrap(), "rhobar-rho"),
    ];
    for (got, want) in checks {
        ensure!(got == ex(&t, want), "{got} != {want}");
    }
    let m = in_basis(
        &t,
        &mult_matrix(&rho.euler_class().unwrap()).unwrap(),
        &["chi0", "omega", "omegabar", "rho", "rhobar"],
    );
    let expect = IntMatrix::from_rows(&[
        vec![0, 0, 0, 1, -1],
        vec![0, 0, 0, 1, -1],
        vec![0, 0, 0, 1, -1],
        vec![-1, -1, -1, 0, 1],
        vec![1, 1, 1, -1, 0],
    ]);
    ensure!(m == expect, "M = {m:?}");
    Ok("table, products, Lambda^2 rho, e_rho, matrix M".into())
}

/// Multiplies polynomials in `Z[x]/(x^n - 1)`.
fn cyclic_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[(i + j) % n] += x * y;
        }
    }
    out
}

/// `Z[L]/(1 - L^n, (1 - L)^m)` presented on the basis `1, L, ..., L^(n-1)`.
fn lens_presentation(n: usize, m: u32) -> IntMatrix {
    let mut base = vec![0i64; n];
    base[0] = 1;
    let mut one_minus = vec![0i64; n];
    one_minus[0] += 1;
    one_minus[1 % n] -= 1;
    let gen = (0..m).fold(base, |acc, _| cyclic_mul(&acc, &one_minus, n));
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut shift = vec![0i64; n];
            shift[j] = 1;
            cyclic_mul(&gen, &shift, n).into_iter().map(BigInt::from).collect()
        })
        .collect();
    IntMatrix::from_columns(n, &cols)
}

/// Least `n <= 64` with `n * v` an integer combination of the two columns,
/// coefficients searched in `[-256, 256]`.
fn brute_order_2d(c1: [i64; 2], c2: [i64; 2], v: [i64; 2]) -> Option<i64> {
    (1..=64).find(|&n| {
        (-256..=256).any(|a: i64| {
            (-256..=256).any(|b: i64| a * c1[0] + b * c2[0] == n * v[0] && a * c1[1] + b * c2[1] == n * v[1])
        })
    })
}

fn is_power_of_two(o: &Order) -> bool {
    o.finite().is_some_and(|n| n.is_positive() && (n & (n - BigInt::one())).is_zero())
}

fn lens() -> Outcome {
    for n in 2..=8u32 {
        let t = table(Builtin::Cyclic(n));
        for m in 1..=3 {
            let q = euler_quotient(&ex(&t, "L"), m).unwrap();
            let want = cokernel(&lens_presentation(n as usize, m));
            ensure!(q.group() == &want, "C{n}, m = {m}: {} vs {}", q.group(), want);
            ensure!(want.free_rank == 1, "C{n}, m = {m}: free rank {}", want.free_rank);
        }
    }

    let t = table(Builtin::Cyclic(2));
    let alpha = ex(&t, "1-sigma");
    let (i1, is) = (t.resolve("chi0").unwrap(), t.resolve("sigma").unwrap());
    for m in 1..=6u32 {
        let cert = certify(&FlavoredRep::complex(ex(&t, "sigma")), m, &alpha, CertFlavor::K, true).unwrap();
        let want = 1i64 << (m - 1);
        ensure!(cert.order == fin(want), "C2, m = {m}: order {}", cert.order);
        // (1 - s)^m and s (1 - s)^m on the basis 1, s
        let e = (0..m).fold(vec![1i64, 0], |acc, _| cyclic_mul(&acc, &[1, -1], 2));
        let es = cyclic_mul(&e, &[0, 1], 2);
        let brute = brute_order_2d([e[0], e[1]], [es[0], es[1]], [1, -1]);
        ensure!(brute == Some(want), "C2, m = {m}: oracle {brute:?}");
        ensure!(alpha.coords()[i1] == BigInt::one() && alpha.coords()[is] == -BigInt::one(), "basis order");
    }

    let t = table(Builtin::Cyclic(8));
    let lam = FlavoredRep::complex(ex(&t, "L"));
    let alpha = ex(&t, "2-L-L7");
    let k = certify(&lam, 3, &alpha, CertFlavor::K, true).unwrap().order;
    let j = certify(&lam, 3, &alpha, CertFlavor::JPrime, true).unwrap().order;
    ensure!(is_power_of_two(&k) && is_power_of_two(&j), "C8 orders K = {k}, J' = {j}");
    ensure!(j.divides(&k), "J' = {j} does not divide K = {k}");
    ensure!(k.divides(&fin(16)), "K = {k} does not divide 16");
    Ok(format!("21 lens quotients, C2 orders 2^(m-1) for m <= 6, C8 K = {k}, J' = {j}"))
}

fn c5_j() -> Outcome {
    let t = table(Builtin::Cyclic(5));
    let psi = ex(&t, "L+L4").adams(3);
    ensure!(psi == ex(&t, "L2+L3"), "psi^3 = {psi}");
    let d = ex(&t, "L+L4-L2-L3");
    for odd in [false, true] {
        let o = j_point_order(&d, odd).unwrap();
        ensure!(o == fin(1), "j order {o} (odd only {odd})");
    }
    Ok("psi^3 lambda = mu, j(lambda - mu) has order 1".into())
}

fn random_coords(rng: &mut ChaCha8Rng, len: usize, lo: i64, hi: i64) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect()
}

fn random_ro(rng: &mut ChaCha8Rng, t: &Arc<CharacterTable>) -> VirtualChar {
    let rs = real_structure(t);
    let c = random_coords(rng, rs.ro_rank(), -2, 2);
    rs.from_ro_coords(t, &c)
}

fn smooth(n: &BigInt, order: usize) -> bool {
    let mut n = n.clone();
    for p in 2..=order as u64 {
        let p = BigInt::from(p);
        while !n.is_zero() && n.is_multiple_of(&p) {
            n /= &p;
        }
    }
    n.is_one()
}

fn random_lambda(rng: &mut ChaCha8Rng, t: &Arc<CharacterTable>) -> VirtualChar {
    loop {
        let c = random_coords(rng, t.len(), 0, 1);
        let v = VirtualChar::new(t.clone(), c).unwrap();
        if !v.is_zero() && v.dim() <= BigInt::from(8) {
            return v;
        }
    }
}

fn theorem_equivalences() -> Outcome {
    let tables = small_tables();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut holds, mut real) = (0, 0);
    for case in 0..200 {
        let t = &tables[rng.gen_range(0..tables.len())];
        let lam = random_lambda(&mut rng, t);
        let m = rng.gen_range(1..=3u32);
        let beta = VirtualChar::new(t.clone(), random_coords(&mut rng, t.len(), -2, 2)).unwrap();
        let alpha = match case % 4 {
            0 => beta,
            1 => random_ro(&mut rng, t),
            2 => lam.euler_class().unwrap().tensor(&beta).unwrap(),
            _ => {
                let both = lam.plus(&lam.conj()).unwrap();
                both.euler_class().unwrap().tensor(&random_ro(&mut rng, t)).unwrap()
            }
        };
        let ctx = format!("case {case}: {} lambda = {lam}, m = {m}, alpha = {alpha}", t.group().descriptor());
        let q = euler_quotient(&lam, m).map_err(|e| format!("{ctx}: {e}"))?;
        let order = talpha_order(&q, &alpha).map_err(|e| format!("{ctx}: {e}"))?;
        let pred = predicate_talpha(&lam, &alpha).map_err(|e| format!("{ctx}: {e}"))?;
        ensure!(pred.holds == order.is_finite(), "{ctx}: predicate {} but order {order}", pred.holds);
        if let Some(n) = order.finite() {
            holds += 1;
            ensure!(smooth(n, t.group().order()), "{ctx}: order {n} is not |G|-smooth");
        }
        if real_structure(t).contains(&alpha) {
            real += 1;
            for odd in [true, false] {
                let j = j_quotient_order(&q, &alpha, odd).map_err(|e| format!("{ctx}: {e}"))?;
                ensure!(j.divides(&order), "{ctx}: J' order {j} does not divide {order}");
            }
        }
    }

    let mut vanishing = 0;
    for case in 0..200 {
        let t = &tables[rng.gen_range(0..tables.len())];
        let g = t.group();
        let cyclic = g.cyclic_subgroups();
        let rs = real_structure(t);
        let alpha = if case % 2 == 0 {
            random_ro(&mut rng, t)
        } else {
            // random point of the lattice cut out by the cyclic fixed dimensions
            let basis = rs.ro_basis(t);
            let rows: Vec<Vec<BigInt>> = cyclic
                .iter()
                .map(|c| basis.iter().map(|b| b.fixed_dim(c).unwrap()).collect())
                .collect();
            let k = kernel_basis(&IntMatrix::from_rows(&rows));
            let w = random_coords(&mut rng, k.cols(), -2, 2);
            let ro = if k.cols() == 0 { vec![BigInt::zero(); rs.ro_rank()] } else { k.mul_vec(&w).unwrap() };
            rs.from_ro_coords(t, &ro)
        };
        let all = g.all_subgroups().unwrap().iter().all(|h| alpha.fixed_dim(h).unwrap().is_zero());
        let cyc = cyclic.iter().all(|h| alpha.fixed_dim(h).unwrap().is_zero());
        let j = j_point_order(&alpha, false).unwrap() == fin(1);
        ensure!(
            all == cyc && cyc == j,
            "{} alpha = {alpha}: all subgroups {all}, cyclic {cyc}, j trivial {j}",
            g.descriptor()
        );
        vanishing += usize::from(all);
    }
    Ok(format!(
        "200 instances ({holds} finite, {real} real), 200 RO elements ({vanishing} with vanishing fixed points)"
    ))
}

fn det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(move |s| s.count_ones() as usize == k)
        .map(move |s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
}

fn minor_gcd(m: &[Vec<i64>], k: usize) -> i64 {
    let mut g = 0i64;
    for rs in subsets(m.len(), k) {
        for cs in subsets(m[0].len(), k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

fn snf_oracle(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..500 {
        let mut rows: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        if rng.gen_ratio(1, 4) {
            for r in &mut rows {
                r[3] = r[0] + r[2];
            }
        }
        let im = IntMatrix::from_rows(&rows);
        let diag = snf(&im).diagonal();
        let mut prev = 1;
        for k in 1..=4 {
            let dk = minor_gcd(&rows, k);
            let want = if dk == 0 { 0 } else { dk / prev };
            ensure!(diag[k - 1] == BigInt::from(want), "SNF of {rows:?}: {diag:?}");
            if dk != 0 {
                prev = dk;
            }
        }
        let v: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
        let got = element_order(&im, &v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap();
        let d = det(&rows);
        if d == 0 {
            let mut aug = rows.clone();
            for (r, x) in aug.iter_mut().zip(&v) {
                r.push(*x);
            }
            let rank = |m: &[Vec<i64>]| (1..=4).rev().find(|&k| minor_gcd(m, k) != 0).unwrap_or(0);
            ensure!(
                (rank(&aug) > rank(&rows)) == !got.is_finite(),
                "order of {v:?} mod {rows:?}: {got}"
            );
            continue;
        }
        // Cramer: n v lies in the lattice iff adj(M) v n = 0 mod det(M)
        let adj_v: Vec<i64> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = (0..4)
                            .filter(|&r| r != j)
                            .map(|r| (0..4).filter(|&c| c != i).map(|c| rows[r][c]).collect())
                            .collect();
                        let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                        s * det(&minor) * v[j]
                    })
                    .sum()
            })
            .collect();
        let brute = (1..=64i64).find(|n| adj_v.iter().all(|x| (x * n) % d == 0));
        match brute {
            Some(n) => ensure!(got == fin(n), "order of {v:?} mod {rows:?}: {got}, oracle {n}"),
            None => ensure!(got.finite().is_some_and(|n| n > &BigInt::from(64)), "order {got} should exceed 64"),
        }
    }
    Ok(())
}

fn structural() -> Outcome {
    let tables: Vec<Arc<CharacterTable>> = Builtin::catalog().into_iter().map(table).collect();
    for t in &tables {
        let cc = t.classes();
        let n = BigRational::from_integer(t.group().order().into());
        let r = t.len();
        for i in 0..r {
            for j in 0..r {
                let s = (0..r).fold(Cyc::zero(1), |acc, c| {
                    let size = BigRational::from_integer(cc.size(c).into());
                    &acc + &(t.value(i, c) * &t.value(j, c).conj()).scale(&size)
                });
                let want = if i == j { n.clone() } else { BigRational::zero() };
                ensure!(s.as_rational() == Some(want), "{}: rows {i}, {j}", t.group().descriptor());
                // column orthogonality: sum_i chi_i(a) conj chi_i(b) = |C(a)| delta
                let s = (0..r).fold(Cyc::zero(1), |acc, k| &acc + &(t.value(k, i) * &t.value(k, j).conj()));
                let cent = BigRational::from_integer((t.group().order() / cc.size(i)).into());
                let want = if i == j { cent } else { BigRational::zero() };
                ensure!(s.as_rational() == Some(want), "{}: columns {i}, {j}", t.group().descriptor());
            }
        }

        let gram = gram_matrix(t);
        for i in 0..r {
            let conj: Vec<Cyc> = t.row(i).iter().map(Cyc::conj).collect();
            let ci = (0..r).find(|&k| t.row(k) == conj.as_slice()).unwrap();
            for j in 0..r {
                let want = i64::from(j == ci);
                ensure!(gram[(i, j)] == BigInt::from(want), "{}: Gram ({i}, {j})", t.group().descriptor());
            }
        }
    }

    let small = small_tables();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for _ in 0..100 {
        let t = &small[rng.gen_range(0..small.len())];
        let u = random_lambda(&mut rng, t);
        let w = random_lambda(&mut rng, t);
        let lhs = u.plus(&w).unwrap().euler_class().unwrap();
        let rhs = u.euler_class().unwrap().tensor(&w.euler_class().unwrap()).unwrap();
        ensure!(lhs == rhs, "e(U + W) != e(U) e(W) for U = {u}, W = {w}");
    }
    for t in &small {
        let v = random_lambda(&mut rng, t);
        let k = karoubi_rank(&v, &VirtualChar::zero(t), Flavor::Complex).unwrap();
        ensure!(k == t.len(), "{}: complex Karoubi rank {k}", t.group().descriptor());
    }
    snf_oracle(&mut rng)?;
    Ok(format!(
        "orthogonality and Gram on {} groups, 100 Euler pairs, Karoubi, 500 SNF and order checks",
        tables.len()
    ))
}

fn gamma_fixture() -> Outcome {
    let doc: serde_json::Value = serde_json::from_str(include_str!("fixtures/adams_ko_orders.json")).unwrap();
    let orders: Vec<u64> = doc["orders"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    ensure!(orders.len() == 17, "fixture has {} entries", orders.len());
    for m in 0..=16u64 {
        let count = (1..=m).filter(|k| matches!(k % 8, 0 | 1 | 2 | 4)).count() as u64;
        ensure!(gamma(m) == count, "gamma({m}) = {}, count {count}", gamma(m));
        ensure!(orders[m as usize] == 1 << count, "KO order for m = {m}: {}", orders[m as usize]);
    }
    Ok("gamma(0..=16) and 17 KO orders".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "symmetric group S3", sigma3),
        (2, "quaternion group Q8", quaternion),
        (3, "group of order 21", frobenius21),
        (4, "lens quotients", lens),
        (5, "C5 J-equivalence", c5_j),
        (6, "theorem equivalences", theorem_equivalences),
        (7, "structural invariants", structural),
        (8, "gamma fixture", gamma_fixture),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (n, name, run) in criteria {
        let t0 = Instant::now();
        let mut outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let dt = t0.elapsed();
        if n == 1 && dt > CRITERION_ONE_BUDGET {
            outcome = outcome.and_then(|d| Err(format!("{d}, but took {dt:?} (budget {CRITERION_ONE_BUDGET:?})")));
        }
        match outcome {
            Ok(detail) => println!("PASS {n} {name}: {detail} [{:.2}s]", dt.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("FAIL {n} {name}: {why} [{:.2}s]", dt.as_secs_f64());
            }
        }
    }
    let total = start.elapsed();
    let secs = total.as_secs_f64();
    if total > TOTAL_BUDGET {
        failures += 1;
        println!("FAIL total time {secs:.1}s exceeds {}s", TOTAL_BUDGET.as_secs());
    } else {
        println!("total time {secs:.1}s (budget {}s)", TOTAL_BUDGET.as_secs());
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
