//! Elementary number theory: prime sieves and trial-division factoring.

/// All primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Integer square root, `floor(sqrt(n))`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = ((n as f64).sqrt() as u64).min(u32::MAX as u64);
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Prime factorization `[(p, e)]` in increasing order of `p`. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `μ²(n)` by trial division.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Factors every integer of `[n0, n1)` with primes up to `sqrt(n1)`.
///
/// `visit(n, factors)` is called in increasing order of `n` for `n >= 1`;
/// the factor list is in increasing order of `p`.
pub fn factor_segment(n0: u64, n1: u64, mut visit: impl FnMut(u64, &[(u64, u32)])) {
    let lo = n0.max(1);
    if lo >= n1 {
        return;
    }
    let len = (n1 - lo) as usize;
    let mut rest: Vec<u64> = (lo..n1).collect();
    let mut factors: Vec<Vec<(u64, u32)>> = vec![Vec::new(); len];
    for p in primes_up_to(isqrt(n1 - 1)) {
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m < n1 {
            let i = (m - lo) as usize;
            let mut e = 0;
            while rest[i].is_multiple_of(p) {
                rest[i] /= p;
                e += 1;
            }
            factors[i].push((p, e));
            m += p;
        }
    }
    for (i, f) in factors.iter_mut().enumerate() {
        if rest[i] > 1 {
            f.push((rest[i], 1));
        }
        visit(lo + i as u64, f);
    }
}
