use catlight::linalg::{hermitian_eigenvalues, kron, rk4_step, trace_norm_hermitian, ComplexMatrix, ComplexVector};
use catlight::C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(-2.0..2.0), 0.0);
        for j in (i + 1)..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut m: ComplexMatrix) -> C64 {
    let n = m.rows();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[(a, col)].norm().total_cmp(&m[(b, col)].norm())).unwrap();
        if m[(pivot, col)].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                let tmp = m[(col, k)];
                m[(col, k)] = m[(pivot, k)];
                m[(pivot, k)] = tmp;
            }
            det = -det;
        }
        det *= m[(col, col)];
        for r in (col + 1)..n {
            let f = m[(r, col)] / m[(col, col)];
            for k in col..n {
                let v = m[(col, k)];
                m[(r, k)] -= f * v;
            }
        }
    }
    det
}

/// Roots of the characteristic polynomial: sign changes of `det(A − λI)`
/// on a fine grid, refined by bisection.
fn characteristic_roots(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    let bound = a.frobenius_norm() + 1.0;
    let p = |x: f64| {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= x;
        }
        determinant(shifted).re
    };
    let grid = 20_000;
    let mut roots = vec![];
    let mut lo = -bound;
    let mut plo = p(lo);
    for k in 1..=grid {
        let hi = -bound + 2.0 * bound * k as f64 / grid as f64;
        let phi = p(hi);
        if plo == 0.0 || plo.signum() != phi.signum() {
            let (mut a, mut b, mut pa) = (lo, hi, plo);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let pm = p(mid);
                if pm.signum() == pa.signum() && pm != 0.0 {
                    a = mid;
                    pa = pm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        lo = hi;
        plo = phi;
    }
    roots
}

#[test]
fn eigenvalues_match_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let a = random_hermitian(&mut rng, 4);
        let eig = hermitian_eigenvalues(&a).unwrap();
        let roots = characteristic_roots(&a);
        assert_eq!(roots.len(), 4, "roots {roots:?}");
        for (e, r) in eig.iter().zip(&roots) {
            assert!((e - r).abs() < 1e-9, "{eig:?} vs {roots:?}");
        }
    }
}

#[test]
fn bell_partial_transpose_trace_norm() {
    let h = C64::new(0.5, 0.0);
    let z = C64::new(0.0, 0.0);
    // Partial transpose of the Bell projector on (↑↑, ↑↓, ↓↑, ↓↓).
    let pt = ComplexMatrix::from_row_major(4, 4, vec![h, z, z, z, z, z, h, z, z, h, z, z, z, z, z, h]);
    assert!((trace_norm_hermitian(&pt).unwrap() - 2.0).abs() < 1e-12);
}

/// `exp(A)` by scaling and squaring of a degree-20 Taylor series.
fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let norm = a.frobenius_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scale_real(0.5f64.powi(squarings as i32));
    let n = a.rows();
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=20 {
        term = term.matmul(&scaled).scale_real(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

#[test]
fn rk4_matches_matrix_exponential() {
    let c = |re: f64, im: f64| C64::new(re, im);
    // Anti-Hermitian: A = −iH.
    let h = ComplexMatrix::from_row_major(2, 2, vec![c(0.7, 0.0), c(0.3, -0.4), c(0.3, 0.4), c(-1.1, 0.0)]);
    let a = h.scale(c(0.0, -1.0));
    let y0 = ComplexVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
    let mut y = y0.clone();
    let dt = 0.01;
    for k in 0..100 {
        y = rk4_step(|_, v: &ComplexVector| a.matvec(v), &y, k as f64 * dt, dt);
    }
    let exact = expm(&a).matvec(&y0);
    let err = (0..2).map(|i| (y[i] - exact[i]).norm()).fold(0.0, f64::max);
    assert!(err < 1e-8, "error {err:e}");
}

#[test]
fn rk4_is_fourth_order() {
    let omega = 1.0;
    let t_end = 10.0;
    let error = |dt: f64| {
        let steps = (t_end / dt).round() as usize;
        let mut y = C64::new(1.0, 0.0);
        for k in 0..steps {
            y = rk4_step(|_, v: &C64| C64::new(0.0, -omega) * v, &y, k as f64 * dt, dt);
        }
        (y - C64::from_polar(1.0, -omega * t_end)).norm()
    };
    let dts = [0.2, 0.1, 0.05, 0.025];
    let xs: Vec<f64> = dts.iter().map(|d: &f64| d.ln()).collect();
    let ys: Vec<f64> = dts.iter().map(|&d| error(d).ln()).collect();
    let mx = xs.iter().sum::<f64>() / 4.0;
    let my = ys.iter().sum::<f64>() / 4.0;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 4.0).abs() <= 0.2, "slope {slope}");
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-3i32..4, -3i32..4), rows * cols).prop_map(move |v| {
        ComplexMatrix::from_row_major(rows, cols, v.into_iter().map(|(r, i)| C64::new(r as f64, i as f64)).collect())
    })
}

fn arb_hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    any::<u64>().prop_map(move |seed| random_hermitian(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

proptest! {
    #[test]
    fn kron_is_associative(a in arb_matrix(2, 3), b in arb_matrix(3, 2), c in arb_matrix(2, 2)) {
        prop_assert_eq!(kron(&kron(&a, &b), &c), kron(&a, &kron(&b, &c)));
    }

    #[test]
    fn spectrum_reproduces_trace_invariants(m in arb_hermitian(4)) {
        let eig = hermitian_eigenvalues(&m).unwrap();
        let sum: f64 = eig.iter().sum();
        let sum_sq: f64 = eig.iter().map(|e| e * e).sum();
        prop_assert!((sum - m.trace().re).abs() <= 1e-9 * 4.0);
        prop_assert!((sum_sq - m.matmul(&m).trace().re).abs() <= 1e-9 * 16.0);
        prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }
}
