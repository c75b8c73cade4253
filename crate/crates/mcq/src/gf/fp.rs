//! Polynomials over the prime field, only used to pick the field modulus.

use super::prime_factors;

fn trim(f: &mut Vec<u64>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = pow_mod(f[df], p - 2, p);
    while r.len() > df && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=df {
            let t = c * f[i] % p;
            r[dr - df + i] = (r[dr - df + i] + p - t) % p;
        }
        trim(&mut r);
        if r.len() - 1 < df {
            break;
        }
    }
    r
}

fn pow_mod(mut b: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        k >>= 1;
    }
    acc
}

fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, f, p)
}

/// x^(p^k) mod f.
fn x_pow_pk(f: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut cur = rem(&[0, 1], f, p);
    for _ in 0..k {
        let mut base = cur.clone();
        let mut acc = vec![1u64];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub_x(g: &[u64], p: u64) -> Vec<u64> {
    let mut g = g.to_vec();
    if g.len() < 2 {
        g.resize(2, 0);
    }
    g[1] = (g[1] + p - 1) % p;
    trim(&mut g);
    g
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = (f.len() - 1) as u32;
    if e == 1 {
        return true;
    }
    let full = x_pow_pk(f, p, e);
    let d = sub_x(&full, p);
    if !(d.len() == 1 && d[0] == 0) {
        return false;
    }
    for l in prime_factors(e as u64) {
        let g = sub_x(&x_pow_pk(f, p, e / l as u32), p);
        let h = gcd(f, &g, p);
        if h.len() > 1 {
            return false;
        }
    }
    true
}

/// Monic irreducible of degree e over GF(p), smallest in integer encoding.
pub fn lowest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let p64 = p as u64;
    let count = (p as u64).pow(e);
    for c in 0..count {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut x = c;
        for _ in 0..e {
            f.push(x % p64);
            x /= p64;
        }
        f.push(1);
        if e > 1 && f[0] == 0 {
            continue;
        }
        if is_irreducible(&f, p64) {
            return f.into_iter().map(|v| v as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_lowest() {
        assert_eq!(lowest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(lowest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(lowest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(lowest_irreducible(7, 1), vec![0, 1]);
    }

    #[test]
    fn irreducible_counts_gf2() {
        // degree-4 monic irreducibles over GF(2): 3
        let n = (0..16u64)
            .filter(|&c| {
                let f: Vec<u64> = (0..4).map(|i| (c >> i) & 1).chain([1]).collect();
                is_irreducible(&f, 2)
            })
            .count();
        assert_eq!(n, 3);
    }
}
