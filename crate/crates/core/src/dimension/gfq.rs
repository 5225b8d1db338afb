//! Small finite fields GF(p^e) for point enumeration.
//!
//! Elements are integers in `0..q` read as base-`p` digit vectors of a
//! polynomial in `x` modulo a primitive polynomial; digit 0 is the constant
//! term, so `c < p` is the embedded residue `c`. Multiplication goes through
//! discrete log tables.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SmallField {
    p: u32,
    e: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Largest field order for which tables are built.
const MAX_ORDER: u64 = 1 << 22;

impl SmallField {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        let q = p.checked_pow(e).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::budget(format!("enumeration field GF({p}^{e}) exceeds the table limit of {MAX_ORDER} elements"))
        })?;
        if e == 0 {
            return Err(Error::input("extension degree must be positive"));
        }
        let (p, q) = (p as u32, q as u32);
        // search monic modulus m(x) = x^e + sum c_i x^i for which x has order q - 1
        let mut tail = 0u32;
        loop {
            if tail >= q {
                return Err(Error::input(format!("no primitive polynomial found for GF({p}^{e})")));
            }
            let modulus = digits(tail, p, e);
            if let Some((exp, log)) = try_tables(p, e, q, &modulus) {
                return Ok(SmallField { p, e, q, exp, log });
            }
            tail += 1;
        }
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[s as usize]
    }

    /// Embeds a residue of the prime subfield.
    pub fn embed(&self, c: u64) -> u32 {
        (c % self.p as u64) as u32
    }
}

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Builds exp/log tables if `x` is primitive modulo `x^e + tail`.
fn try_tables(p: u32, e: u32, q: u32, tail: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let e = e as usize;
    let mut exp = vec![0u32; q as usize - 1];
    let mut log = vec![u32::MAX; q as usize];
    // current power of x as coefficient vector, starting at 1
    let mut cur = vec![0u32; e];
    cur[0] = 1;
    for k in 0..(q - 1) {
        let code = encode(&cur, p);
        if log[code as usize] != u32::MAX {
            return None;
        }
        log[code as usize] = k;
        exp[k as usize] = code;
        // multiply by x: shift, then reduce x^e = -tail
        let top = cur[e - 1];
        for i in (1..e).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..e {
                cur[i] = (cur[i] + (p - tail[i]) % p * top) % p;
            }
        }
    }
    // after q - 1 steps x^(q-1) must be 1
    if encode(&cur, p) != 1 {
        return None;
    }
    Some((exp, log))
}
