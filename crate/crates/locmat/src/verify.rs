//! Seeded property suites. Every suite draws from its own generator derived
//! from the seed, so `--suite x` reproduces the `x` section of `--suite all`.

use std::fmt::{Display, Write as _};

use locmat_core::{
    anti_to_iso, apply_psi, commutator, decompose_gl, decompose_transvections, is_block_transvection,
    lemma1_rewrite, lift_field_auto, sl_membership, AntiIsomorphism, AutomorphismDescriptor, Field,
    PeriodicMatrix, RelativeDeterminant, SlMembership, SteinitzNumber, Token,
};
use serde::Serialize;

use crate::formats::MatrixFile;
use crate::sample::{standard_fields, Sampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Steinitz,
    Permatrix,
    Groups,
    Homothety,
    Autos,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Steinitz,
        Suite::Permatrix,
        Suite::Groups,
        Suite::Homothety,
        Suite::Autos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Steinitz => "steinitz",
            Suite::Permatrix => "permatrix",
            Suite::Groups => "groups",
            Suite::Homothety => "homothety",
            Suite::Autos => "autos",
            Suite::All => "all",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Suite::Steinitz => 1,
            Suite::Permatrix => 2,
            Suite::Groups => 3,
            Suite::Homothety => 4,
            Suite::Autos => 5,
            Suite::All => 0,
        }
    }

    pub fn sampler(self, seed: u64) -> Sampler {
        Sampler::new(seed ^ self.salt().wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

const KEPT_FAILURES: usize = 20;

/// Running count of checks and failures.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub checks: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn check<E: Display>(
        &mut self,
        what: &str,
        outcome: Result<bool, E>,
        detail: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        let msg = match outcome {
            Ok(true) => return,
            Ok(false) => format!("{what}: {}", detail()),
            Err(e) => format!("{what}: error {e}: {}", detail()),
        };
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: usize,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn render(&self) -> String {
        let mut out = format!("verify seed={} trials={}\n", self.seed, self.trials);
        for s in &self.suites {
            let _ = writeln!(
                out,
                "  {:<10} checks={} failed={}",
                s.suite, s.tally.checks, s.tally.failed
            );
            for f in &s.tally.failures {
                let _ = writeln!(out, "    FAIL {f}");
            }
        }
        out.push_str(if self.passed { "PASS\n" } else { "FAIL\n" });
        out
    }
}

pub fn run(suite: Suite, seed: u64, trials: usize) -> VerifyReport {
    let chosen: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let suites: Vec<SuiteReport> = chosen
        .into_iter()
        .map(|s| SuiteReport {
            suite: s.name(),
            trials,
            tally: run_one(s, seed, trials),
        })
        .collect();
    let passed = suites.iter().all(|s| s.tally.passed());
    VerifyReport {
        seed,
        trials,
        suites,
        passed,
    }
}

fn run_one(suite: Suite, seed: u64, trials: usize) -> Tally {
    let mut sampler = suite.sampler(seed);
    let mut tally = Tally::default();
    let trial: fn(&mut Sampler, &mut Tally, usize) = match suite {
        Suite::Steinitz => steinitz_trial,
        Suite::Permatrix => permatrix_trial,
        Suite::Groups => groups_trial,
        Suite::Homothety => homothety_trial,
        Suite::Autos => autos_trial,
        Suite::All => unreachable!("expanded by run"),
    };
    for t in 0..trials {
        trial(&mut sampler, &mut tally, t);
    }
    tally
}

fn show(a: &PeriodicMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(a)).expect("serializable")
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn int(n: u64) -> SteinitzNumber {
    SteinitzNumber::from_integer(n).expect("positive")
}

// ---------------------------------------------------------------- steinitz

/// Monoid and lattice laws, quotient witnesses and agreement with integer
/// arithmetic for operands up to 10^6.
pub fn steinitz_trial(s: &mut Sampler, t: &mut Tally, trial: usize) {
    let integral = s.chance(0.5);
    let (a, b, c) = if integral {
        let xs = [s.integer(1_000_000), s.integer(1_000_000), s.integer(1_000_000)];
        integer_oracle(t, trial, xs[0], xs[1]);
        (int(xs[0]), int(xs[1]), int(xs[2]))
    } else {
        (s.steinitz(), s.steinitz(), s.steinitz())
    };
    let d = || format!("trial {trial}: a={a}, b={b}, c={c}");
    t.check(
        "associativity",
        Ok::<_, String>(
            a.multiply(&b).multiply(&c) == a.multiply(&b.multiply(&c))
                && a.lcm(&b).lcm(&c) == a.lcm(&b.lcm(&c))
                && a.gcd(&b).gcd(&c) == a.gcd(&b.gcd(&c)),
        ),
        d,
    );
    t.check(
        "commutativity",
        Ok::<_, String>(
            a.multiply(&b) == b.multiply(&a) && a.lcm(&b) == b.lcm(&a) && a.gcd(&b) == b.gcd(&a),
        ),
        d,
    );
    t.check(
        "absorption",
        Ok::<_, String>(a.lcm(&a.gcd(&b)) == a && a.gcd(&a.lcm(&b)) == a),
        d,
    );
    let ab = a.multiply(&b);
    t.check(
        "quotient round-trip",
        ab.quotient(&a).map(|q| a.divides(&ab) && q.multiply(&a) == ab && b.divides(&q)),
        d,
    );
    let g = a.gcd(&b);
    t.check(
        "gcd divides",
        a.quotient(&g).map(|q| g.divides(&a) && g.divides(&b) && q.multiply(&g) == a),
        d,
    );
    t.check(
        "divisibility vs lattice",
        Ok::<_, String>(a.divides(&b) == (a.lcm(&b) == b) && a.divides(&b) == (a.gcd(&b) == a)),
        d,
    );
    t.check(
        "format round-trip",
        SteinitzNumber::parse(&a.to_string()).map(|x| x == a),
        d,
    );
}

fn integer_oracle(t: &mut Tally, trial: usize, x: u64, y: u64) {
    let (a, b) = (int(x), int(y));
    let g = gcd_u64(x, y);
    let l = x / g * y;
    let d = || format!("trial {trial}: x={x}, y={y}");
    t.check(
        "integer oracle",
        Ok::<_, String>(
            a.to_u64() == Some(x)
                && a.gcd(&b).to_u64() == Some(g)
                && a.lcm(&b).to_u64() == Some(l)
                && a.multiply(&b).to_u64() == Some(x * y)
                && a.divides(&b) == y.is_multiple_of(x),
        ),
        d,
    );
    if y.is_multiple_of(x) {
        t.check(
            "integer quotient",
            b.quotient(&a).map(|q| q.to_u64() == Some(y / x)),
            d,
        );
    }
}

// --------------------------------------------------------------- permatrix

const PERIODS: [usize; 6] = [1, 2, 3, 4, 6, 12];

/// Ring axioms, canonical-form stability, the embedding homomorphism and
/// `det_{nk} = det_n^k`, cycling through GF(5), GF(7), GF(25) and ℚ.
pub fn permatrix_trial(s: &mut Sampler, t: &mut Tally, trial: usize) {
    let fields = standard_fields();
    let f = &fields[trial % fields.len()];
    let [a, b, c] = [(); 3].map(|_| {
        let n = s.pick(&PERIODS);
        s.matrix(f, n)
    });
    let d = || format!("trial {trial}: a={}, b={}, c={}", show(&a), show(&b), show(&c));
    let one = PeriodicMatrix::identity(f);
    let zero = PeriodicMatrix::zero(f);
    let ring = (|| -> Result<bool, locmat_core::MatrixError> {
        Ok(a.add(&b)?.add(&c)? == a.add(&b.add(&c)?)?
            && a.add(&b)? == b.add(&a)?
            && a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?
            && a.mul(&b.add(&c)?)? == a.mul(&b)?.add(&a.mul(&c)?)?
            && a.add(&b)?.mul(&c)? == a.mul(&c)?.add(&b.mul(&c)?)?
            && a.mul(&one)? == a
            && one.mul(&a)? == a
            && a.add(&zero)? == a
            && a.add(&a.neg())? == zero
            && a.sub(&b)?.add(&b)? == a)
    })();
    t.check("ring axioms", ring, d);

    let n = a.period();
    let stable = (|| -> Result<bool, locmat_core::MatrixError> {
        let k = s.range(1, 3) as usize;
        let again = PeriodicMatrix::from_block(a.embed(n * k)?)?;
        Ok(again == a && again.period() == n && a.block().minimal_period() == n)
    })();
    t.check("canonical form stability", stable, d);

    let m = lcm_usize(a.period(), b.period());
    let embed = (|| -> Result<bool, locmat_core::MatrixError> {
        Ok(a.mul(&b)?.embed(m)? == a.embed(m)?.mul(&b.embed(m)?)?
            && a.add(&b)?.embed(m)? == a.embed(m)?.add(&b.embed(m)?)?
            && one.embed(m)?.is_identity())
    })();
    t.check("embedding homomorphism", embed, d);

    for k in [2u64, 3, 4] {
        let det = (|| -> Result<bool, locmat_core::MatrixError> {
            let base = a.det_at(n)?;
            Ok(a.det_at(n * k as usize)? == f.pow_u64(&base, k))
        })();
        t.check("det at multiple level", det, || format!("k={k}, {}", d()));
    }
}

fn lcm_usize(a: usize, b: usize) -> usize {
    a / gcd_u64(a as u64, b as u64) as usize * b
}

// ------------------------------------------------------------------ groups

/// Exhaustive `k`-scan: the smallest `n·k` with `n·k | s` and `det_n^k = 1`.
pub fn sl_oracle(a: &PeriodicMatrix, s: &SteinitzNumber, scan: u64) -> SlMembership {
    let f = a.field();
    let n = a.period() as u64;
    let det = a.block().det();
    let mut power = f.one();
    for k in 1..=scan {
        power = f.mul(&power, &det);
        if f.is_one(&power) && s.is_multiple_of(n * k) {
            return SlMembership::Member { level: n * k };
        }
        // Over ℚ the height of det^k is height(det)^k: once it exceeds 1
        // no later power can be 1, and the numbers only grow.
        if f.is_rationals() && !f.is_one(&power) && !f.is_one(&f.neg(&power)) {
            break;
        }
    }
    SlMembership::NotMember
}

pub const LEMMA1_SHAPES: [(usize, usize); 3] = [(4, 8), (4, 12), (2, 4)];

/// Transvection and GL decompositions, membership against the scan oracle,
/// block-transvection rewriting, the commutator identity and chain unions.
pub fn groups_trial(s: &mut Sampler, t: &mut Tally, trial: usize) {
    let fields = standard_fields();
    let f = &fields[trial % 2];
    let m = s.pick(&[2usize, 3, 4, 6]);
    check_decompositions(s, t, f, m);

    let g = s.pick(&fields);
    let n = s.range(1, 4) as usize;
    let a = if s.chance(0.2) { s.matrix(&g, n) } else { s.invertible(&g, n) };
    let idx = s.steinitz();
    check_sl_membership(t, &a, &idx);

    let (n, q) = s.pick(&LEMMA1_SHAPES);
    let i = s.range(1, q as u64) as usize;
    let j = loop {
        let j = s.range(1, q as u64) as usize;
        if j != i {
            break j;
        }
    };
    let alpha = s.value(&fields[0]);
    check_lemma1(t, &fields[0], i, j, alpha, q, n);

    let n = s.range(3, 6) as usize;
    let mut ids: Vec<usize> = (1..=n).collect();
    for k in 0..3 {
        let r = k + s.index(n - k);
        ids.swap(k, r);
    }
    let a = s.value(f);
    check_commutator(t, f, n, ids[0], ids[1], ids[2], a);

    let chain = divisor_chain(s);
    let g = s.pick(&fields);
    let n = chain[0] as usize;
    let a = if s.chance(0.5) { s.special(&g, n) } else { s.invertible(&g, n) };
    check_chain_union(t, &a, &chain);
}

pub fn check_decompositions(s: &mut Sampler, t: &mut Tally, f: &Field, m: usize) {
    let a = s.special(f, m);
    let d = || format!("m={m}, a={}", show(&a));
    t.check(
        "transvection decomposition",
        decompose_transvections(&a, m).map(|w| {
            w.evaluate() == a
                && w.len() <= m * m + 4 * m
                && w.factors().iter().all(|tok| !tok.is_diagonal())
        }),
        d,
    );
    let b = s.invertible(f, m);
    let d = || format!("m={m}, b={}", show(&b));
    t.check(
        "GL decomposition",
        decompose_gl(&b, m).map(|w| {
            let diag: Vec<&Token> = w.factors().iter().filter(|tok| tok.is_diagonal()).collect();
            let det = b.det_at(m).expect("period divides m");
            w.evaluate() == b
                && matches!(diag.as_slice(), [Token::DiagUnit { alpha, .. }] if *alpha == det)
        }),
        d,
    );
}

pub fn check_sl_membership(t: &mut Tally, a: &PeriodicMatrix, idx: &SteinitzNumber) {
    let got = sl_membership(a, idx);
    let want = sl_oracle(a, idx, 1000);
    t.check("sl membership vs oracle", Ok::<_, String>(got == want), || {
        format!("s={idx}, a={}: got {got:?}, oracle {want:?}", show(a))
    });
}

pub fn check_lemma1(
    t: &mut Tally,
    f: &Field,
    i: usize,
    j: usize,
    alpha: locmat_core::Value,
    q: usize,
    n: usize,
) {
    let d = || format!("(n,q)=({n},{q}), (i,j)=({i},{j}), alpha={}", f.element(alpha.clone()));
    let outcome = lemma1_rewrite(f, i, j, alpha.clone(), q, n).and_then(|w| {
        let want = PeriodicMatrix::transvection(f, q, i, j, alpha.clone())?;
        let shapes = w
            .factors()
            .iter()
            .map(|tok| tok.matrix(f).map(|g| is_block_transvection(&g, q, n)))
            .collect::<Result<Vec<bool>, _>>()?;
        Ok(w.evaluate() == want && shapes.iter().all(|&ok| ok))
    });
    t.check("lemma 1 rewrite", outcome, d);
}

pub fn check_commutator(
    t: &mut Tally,
    f: &Field,
    n: usize,
    i: usize,
    r: usize,
    j: usize,
    a: locmat_core::Value,
) {
    let outcome = (|| -> Result<bool, locmat_core::GroupError> {
        let x = PeriodicMatrix::transvection(f, n, i, r, f.one())?;
        let y = PeriodicMatrix::transvection(f, n, r, j, a.clone())?;
        Ok(commutator(&x, &y)? == PeriodicMatrix::transvection(f, n, i, j, a.clone())?)
    })();
    t.check("commutator identity", outcome, || {
        format!("n={n}, (i,r,j)=({i},{r},{j}), a={}", f.element(a.clone()))
    });
}

/// `n_1 | n_2 | … | n_5`.
pub fn divisor_chain(s: &mut Sampler) -> Vec<u64> {
    let mut chain = vec![s.range(1, 4)];
    for _ in 0..4 {
        let step = s.pick(&[1u64, 2, 2, 3, 5]);
        chain.push(chain.last().expect("nonempty") * step);
    }
    chain
}

/// Membership at `s = lcm(chain)` agrees with membership at some `n_i`.
pub fn check_chain_union(t: &mut Tally, a: &PeriodicMatrix, chain: &[u64]) {
    let idx = SteinitzNumber::lcm_all(chain.iter().map(|&n| int(n)).collect::<Vec<_>>().iter())
        .expect("nonempty chain");
    let at_s = sl_membership(a, &idx).is_member();
    let somewhere = chain.iter().any(|&n| sl_membership(a, &int(n)).is_member());
    t.check("chain union", Ok::<_, String>(at_s == somewhere), || {
        format!("chain={chain:?}, a={}", show(a))
    });
}

// --------------------------------------------------------------- homothety

pub fn homothety_cases() -> Vec<(Field, SteinitzNumber, u64)> {
    vec![
        (
            Field::prime(5).expect("prime"),
            SteinitzNumber::parse("3^inf").expect("literal"),
            3,
        ),
        (
            Field::prime(7).expect("prime"),
            SteinitzNumber::parse("5^inf").expect("literal"),
            5,
        ),
    ]
}

/// Level independence at three levels, multiplicativity, `det_r(1) = 1`,
/// triviality on commutators and the invertibility criterion.
pub fn homothety_trial(s: &mut Sampler, t: &mut Tally, trial: usize) {
    let cases = homothety_cases();
    let (f, idx, p) = &cases[trial % cases.len()];
    let p = *p as usize;
    let rd = RelativeDeterminant::for_index(f, idx).expect("tower exists");
    let periods = [1, 1, p];

    let n = s.pick(&periods);
    let a = if s.chance(0.25) { singular(s, f, n) } else { s.matrix(f, n) };
    let d = || format!("s={idx}, a={}", show(&a));
    let n = a.period();
    t.check(
        "level independence",
        (|| -> Result<bool, locmat_core::HomothetyError> {
            let base = rd.det_r(&a)?;
            Ok(rd.det_r_at(&a, n * p)? == base && rd.det_r_at(&a, n * p * p)? == base)
        })(),
        d,
    );
    t.check(
        "invertible iff det_r nonzero",
        rd.det_r(&a).map(|v| a.is_invertible() == !f.is_zero(&v)),
        d,
    );

    let g = { let n = s.pick(&periods); s.invertible(f, n) };
    let h = { let n = s.pick(&periods); s.invertible(f, n) };
    let report = rd.homothety().verify(&[(g.clone(), h.clone())]);
    t.check("central homothety", Ok::<_, String>(report.passed()), || {
        format!("s={idx}, g={}, h={}: {:?}", show(&g), show(&h), report.counterexamples)
    });
}

/// A matrix of period dividing `n` that is certainly singular.
pub fn singular(s: &mut Sampler, f: &Field, n: usize) -> PeriodicMatrix {
    let mut rows: Vec<Vec<_>> = (0..n).map(|_| (0..n).map(|_| s.value(f)).collect()).collect();
    if n == 1 {
        rows[0][0] = f.zero();
    } else {
        rows[n - 1] = rows[0].clone();
    }
    PeriodicMatrix::make(f, n, rows).expect("square block")
}

// ------------------------------------------------------------------- autos

pub fn random_descriptor(s: &mut Sampler, f: &Field) -> AutomorphismDescriptor {
    let psi = s.chance(0.5);
    let frob = if f.is_rationals() { 0 } else { s.range(0, 3) };
    let inner = s.chance(0.7).then(|| {
        let n = s.pick(&[1usize, 2, 3]);
        s.invertible(f, n)
    });
    AutomorphismDescriptor::new(psi, frob, inner).expect("invertible conjugator")
}

pub fn random_anti(s: &mut Sampler, f: &Field) -> AntiIsomorphism {
    let frob = if f.is_rationals() { 0 } else { s.range(0, 3) };
    let inner = s.chance(0.7).then(|| {
        let n = s.pick(&[1usize, 2, 3]);
        s.invertible(f, n)
    });
    AntiIsomorphism::new(frob, inner).expect("invertible conjugator")
}

/// `apply(d1 ∘ d2, g) = apply(d1, apply(d2, g))` on `points` samples.
pub fn check_compose(
    s: &mut Sampler,
    t: &mut Tally,
    f: &Field,
    d1: &AutomorphismDescriptor,
    d2: &AutomorphismDescriptor,
    points: usize,
) {
    let composed = match d1.compose(d2) {
        Ok(c) => c,
        Err(e) => {
            t.check("compose", Err::<bool, _>(e), || format!("{d1:?} ∘ {d2:?}"));
            return;
        }
    };
    for _ in 0..points {
        let n = s.pick(&[1usize, 2, 3, 4]);
        let g = s.invertible(f, n);
        let outcome = (|| -> Result<bool, locmat_core::AutoError> {
            Ok(composed.apply(&g)? == d1.apply(&d2.apply(&g)?)?)
        })();
        t.check("compose/apply coherence", outcome, || {
            format!("{d1:?} ∘ {d2:?} at g={}", show(&g))
        });
    }
}

/// `ψ` involution and homomorphism, compose/apply coherence, `|H| = 2`,
/// anti-isomorphism conversion and `τ̃` against transpose.
pub fn autos_trial(s: &mut Sampler, t: &mut Tally, trial: usize) {
    let fields = standard_fields();
    let f = &fields[trial % fields.len()];
    let pick = |s: &mut Sampler| {
        let n = s.pick(&[1usize, 2, 3]);
        s.invertible(f, n)
    };
    let (g, h) = (pick(s), pick(s));
    let d = || format!("g={}, h={}", show(&g), show(&h));
    t.check(
        "psi involution and homomorphism",
        (|| -> Result<bool, locmat_core::AutoError> {
            Ok(apply_psi(&apply_psi(&g)?)? == g
                && apply_psi(&g.mul(&h)?)? == apply_psi(&g)?.mul(&apply_psi(&h)?)?)
        })(),
        d,
    );

    let d1 = random_descriptor(s, f);
    let d2 = random_descriptor(s, f);
    check_compose(s, t, f, &d1, &d2, 5);

    let psi = AutomorphismDescriptor::psi();
    t.check(
        "H has order 2",
        psi.compose(&psi).map(|c| c.is_trivial() && !psi.is_trivial()),
        String::new,
    );

    let theta = random_anti(s, f);
    let iso = anti_to_iso(&theta);
    t.check(
        "anti_to_iso",
        (|| -> Result<bool, locmat_core::AutoError> {
            let gi = g.inverse()?;
            Ok(iso.apply(&g.mul(&h)?)? == iso.apply(&g)?.mul(&iso.apply(&h)?)?
                && theta.apply(&g.mul(&h)?)? == theta.apply(&h)?.mul(&theta.apply(&g)?)?
                && theta.apply(&gi)? == iso.apply(&gi.transpose())?
                && theta.group_automorphism().apply(&g)? == theta.apply(&gi)?)
        })(),
        || format!("theta={theta:?}, {}", d()),
    );

    if f.is_finite() {
        let power = s.range(0, 3);
        let n = s.pick(&[1usize, 2, 3, 4]);
        let a = s.matrix(f, n);
        t.check(
            "field map commutes with transpose",
            (|| -> Result<bool, locmat_core::AutoError> {
                Ok(lift_field_auto(power, &a.transpose())? == lift_field_auto(power, &a)?.transpose())
            })(),
            || format!("power={power}, a={}", show(&a)),
        );
    }
}
