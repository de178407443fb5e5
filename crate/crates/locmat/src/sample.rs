//! Seeded random generation of field elements, periodic matrices and
//! Steinitz numbers.

use locmat_core::{
    Exponent, Field, PeriodicMatrix, SteinitzNumber, Value,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The fields exercised by the verification suites: GF(5), GF(7), GF(25), ℚ.
pub fn standard_fields() -> Vec<Field> {
    vec![
        Field::prime(5).expect("prime"),
        Field::prime(7).expect("prime"),
        Field::extension(5, 2, None).expect("tabulated modulus"),
        Field::rationals(),
    ]
}

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }

    pub fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs[self.index(xs.len())].clone()
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// Uniform over a finite field; small-height fractions over ℚ.
    pub fn value(&mut self, f: &Field) -> Value {
        if f.is_rationals() {
            let num = self.rng.random_range(-9i64..=9);
            let den = self.rng.random_range(1i64..=4);
            return f.div(&f.from_i64(num), &f.from_i64(den)).expect("nonzero");
        }
        let p = f.characteristic();
        match f.degree() {
            1 => Value::Residue(self.range(0, p - 1)),
            k => Value::Poly((0..k).map(|_| self.range(0, p - 1)).collect()),
        }
    }

    pub fn nonzero(&mut self, f: &Field) -> Value {
        loop {
            let v = self.value(f);
            if !f.is_zero(&v) {
                return v;
            }
        }
    }

    /// A random `n×n` block, canonicalized (the period may drop below `n`).
    pub fn matrix(&mut self, f: &Field, n: usize) -> PeriodicMatrix {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| self.value(f)).collect())
            .collect();
        PeriodicMatrix::make(f, n, rows).expect("square block")
    }

    /// Random invertible matrix with period dividing `n`.
    pub fn invertible(&mut self, f: &Field, n: usize) -> PeriodicMatrix {
        loop {
            let a = self.matrix(f, n);
            if a.is_invertible() {
                return a;
            }
        }
    }

    /// Random element of `SL_n(F)`, i.e. determinant 1 at level `n`.
    pub fn special(&mut self, f: &Field, n: usize) -> PeriodicMatrix {
        let a = self.invertible(f, n);
        let det = a.det_at(n).expect("period divides n");
        let fix = PeriodicMatrix::diag_unit(f, n, 1, f.inv(&det).expect("unit"))
            .expect("valid position");
        fix.mul(&a).expect("same field")
    }

    /// A Steinitz number over small primes, each exponent zero, finite or
    /// infinite; occasionally `Ω`.
    pub fn steinitz(&mut self) -> SteinitzNumber {
        if self.chance(0.03) {
            return SteinitzNumber::omega();
        }
        let mut s = SteinitzNumber::one();
        for p in SMALL_PRIMES {
            let e = match self.range(0, 7) {
                0..=3 => continue,
                7 => Exponent::Infinite,
                _ => Exponent::finite(self.range(1, 4)),
            };
            s = s.multiply(&SteinitzNumber::prime_power(p, e).expect("prime"));
        }
        s
    }

    /// A positive integer `≤ max`, biased towards smooth values so that
    /// divisibility relations actually occur.
    pub fn integer(&mut self, max: u64) -> u64 {
        if self.chance(0.5) {
            return self.range(1, max);
        }
        let mut n = 1u64;
        loop {
            let p = self.pick(&SMALL_PRIMES);
            match n.checked_mul(p) {
                Some(m) if m <= max && !self.chance(0.15) => n = m,
                _ => return n,
            }
        }
    }
}
