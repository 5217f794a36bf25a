//! Dense polynomials over a prime field F_p, stored low-degree-first.
//!
//! Only what field construction needs: multiplication modulo a monic
//! modulus, gcd, and the Rabin-style irreducibility test.

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `a * b mod modulus` where `modulus` is monic of degree d and the inputs
/// have length at most d. Returns a vector of length exactly d.
pub(crate) fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let d = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    // reduce from the top: x^d = -(m_0 + ... + m_{d-1} x^{d-1})
    for top in (d..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (k, &m) in modulus[..d].iter().enumerate() {
            let idx = top - d + k;
            prod[idx] = (prod[idx] + (p64 - c) * m as u64) % p64;
        }
    }
    let mut out: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    out.resize(d, 0);
    out
}

pub(crate) fn pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let d = modulus.len() - 1;
    let mut result = vec![0u32; d];
    result[0] = 1;
    if d == 0 {
        return result;
    }
    let mut b = base.to_vec();
    b.resize(d, 0);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, modulus, p);
        }
        b = mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

/// Remainder of `a` modulo a nonzero `b` (not necessarily monic).
fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p) as u64;
    let p64 = p as u64;
    while r.len() > db {
        let top = r.len() - 1;
        let factor = r[top] as u64 * lead_inv % p64;
        for (k, &bk) in b.iter().enumerate() {
            let idx = top - db + k;
            r[idx] = ((r[idx] as u64 + (p64 - factor) * bk as u64) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin/Ben-Or test: monic `f` of degree d is irreducible over F_p iff
/// gcd(f, x^{p^i} - x) = 1 for every 1 <= i <= d/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let mut x = vec![0u32; d];
    x[1] = 1;
    let mut frob = x.clone();
    for _ in 1..=d / 2 {
        frob = pow_mod(&frob, p as u64, f, p);
        let mut diff = frob.clone();
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree `d` over F_p, with coefficient
/// vectors (c_0, ..., c_{d-1}) compared lexicographically from c_0.
/// Returned low-degree-first with the leading 1 included.
pub(crate) fn smallest_irreducible(p: u32, d: u32) -> Vec<u32> {
    let d = d as usize;
    let mut digits = vec![0u32; d];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // advance: c_{d-1} is the least significant position
        let mut pos = d;
        loop {
            if pos == 0 {
                unreachable!("an irreducible of every degree exists");
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
        }
    }
}
