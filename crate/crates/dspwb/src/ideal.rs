//! Exact algebra over ideal 2-pi-periodic spectra made of piecewise-constant
//! bands plus weighted impulses, with closed-form inverse sampling and a
//! truncated numeric convolution oracle.
//!
//! Band endpoints are exact rational multiples of pi so that edge
//! coincidences (pi/4 against pi/3 and the like) resolve exactly; floats
//! only appear when a spectrum is sampled back into the time domain.

use crate::error::{Error, Result};
use crate::signal::{linear_convolve, Signal};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

/// An angle stored as `num/den * pi`, reduced, with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiRational {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl PiRational {
    pub const ZERO: PiRational = PiRational { num: 0, den: 1 };
    pub const PI: PiRational = PiRational { num: 1, den: 1 };
    pub const NEG_PI: PiRational = PiRational { num: -1, den: 1 };

    /// `num/den * pi`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "denominator must be nonzero");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den);
        PiRational {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn to_radians(self) -> f64 {
        self.num as f64 * PI / self.den as f64
    }

    pub fn neg(self) -> Self {
        PiRational::new(-self.num, self.den)
    }

    fn add(self, other: Self) -> Self {
        let num = (self.num as i128) * (other.den as i128) + (other.num as i128) * (self.den as i128);
        let den = (self.den as i128) * (other.den as i128);
        let g = {
            let (mut a, mut b) = (num.abs(), den.abs());
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a.max(1)
        };
        PiRational::new((num / g) as i64, (den / g) as i64)
    }

    fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    fn midpoint(self, other: Self) -> Self {
        let sum = self.add(other);
        PiRational::new(sum.num, sum.den * 2)
    }

    /// Adds pi, then wraps into [-pi, pi).
    fn shift_pi_wrapped(self) -> Self {
        let mut v = self.add(PiRational::PI);
        while v >= PiRational::PI {
            v = v.sub(PiRational::new(2, 1));
        }
        while v < PiRational::NEG_PI {
            v = v.add(PiRational::new(2, 1));
        }
        v
    }
}

impl Ord for PiRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = (self.num as i128) * (other.den as i128);
        let rhs = (other.num as i128) * (self.den as i128);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for PiRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (-1, 1) => write!(f, "-pi"),
            (n, 1) => write!(f, "{n}pi"),
            (1, d) => write!(f, "pi/{d}"),
            (-1, d) => write!(f, "-pi/{d}"),
            (n, d) => write!(f, "{n}pi/{d}"),
        }
    }
}

/// `num/den * pi` as an angle argument with the time index folded in, e.g.
/// `pi n/8` or `3pi n/4`.
fn pi_arg(r: PiRational) -> String {
    match (r.num, r.den) {
        (0, _) => "0".to_string(),
        (1, 1) => "pi n".to_string(),
        (-1, 1) => "-pi n".to_string(),
        (n, 1) => format!("{n}pi n"),
        (1, d) => format!("pi n/{d}"),
        (-1, d) => format!("-pi n/{d}"),
        (n, d) => format!("{n}pi n/{d}"),
    }
}

/// A constant-height piece of spectrum over the open interval (lo, hi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: PiRational,
    pub hi: PiRational,
    pub height: Complex64,
}

/// A weighted Dirac impulse at `omega` in [-pi, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse {
    pub omega: PiRational,
    pub weight: Complex64,
}

/// An ideal spectrum: disjoint sorted bands plus impulses. The zero spectrum
/// is represented by having neither.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSpectrum {
    bands: Vec<Band>,
    impulses: Vec<Impulse>,
}

fn canonical_bands(raw: &[Band]) -> Vec<Band> {
    if raw.is_empty() {
        return Vec::new();
    }
    let mut edges: Vec<PiRational> = Vec::new();
    for b in raw {
        assert!(b.lo < b.hi, "band must have lo < hi");
        assert!(
            b.lo >= PiRational::NEG_PI && b.hi <= PiRational::PI,
            "band endpoints must lie within [-pi, pi]"
        );
        edges.push(b.lo);
        edges.push(b.hi);
    }
    edges.sort();
    edges.dedup();
    let mut out: Vec<Band> = Vec::new();
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mid = lo.midpoint(hi);
        let mut height = Complex64::new(0.0, 0.0);
        for b in raw {
            if b.lo < mid && mid < b.hi {
                height += b.height;
            }
        }
        if height.norm() == 0.0 {
            continue;
        }
        if let Some(last) = out.last_mut() {
            if last.hi == lo && last.height == height {
                last.hi = hi;
                continue;
            }
        }
        out.push(Band { lo, hi, height });
    }
    out
}

fn canonical_impulses(raw: &[Impulse]) -> Vec<Impulse> {
    let mut wrapped: Vec<Impulse> = raw
        .iter()
        .map(|imp| {
            let mut omega = imp.omega;
            // fold into [-pi, pi)
            while omega >= PiRational::PI {
                omega = omega.sub(PiRational::new(2, 1));
            }
            while omega < PiRational::NEG_PI {
                omega = omega.add(PiRational::new(2, 1));
            }
            Impulse {
                omega,
                weight: imp.weight,
            }
        })
        .collect();
    wrapped.sort_by(|a, b| a.omega.cmp(&b.omega));
    let mut out: Vec<Impulse> = Vec::new();
    for imp in wrapped {
        if let Some(last) = out.last_mut() {
            if last.omega == imp.omega {
                last.weight += imp.weight;
                continue;
            }
        }
        out.push(imp);
    }
    out.retain(|imp| imp.weight.norm() != 0.0);
    out
}

impl IdealSpectrum {
    /// Builds a spectrum from arbitrary (possibly overlapping) bands, which
    /// are summed and canonicalized, plus impulses.
    pub fn from_parts(bands: Vec<Band>, impulses: Vec<Impulse>) -> Self {
        IdealSpectrum {
            bands: canonical_bands(&bands),
            impulses: canonical_impulses(&impulses),
        }
    }

    pub fn zero() -> Self {
        IdealSpectrum {
            bands: Vec::new(),
            impulses: Vec::new(),
        }
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn impulses(&self) -> &[Impulse] {
        &self.impulses
    }

    pub fn is_zero(&self) -> bool {
        self.bands.is_empty() && self.impulses.is_empty()
    }

    /// Band height at `omega`, edge inclusive (an impulse sitting exactly on
    /// a band edge takes that band's height).
    fn height_at_inclusive(&self, omega: PiRational) -> Complex64 {
        for b in &self.bands {
            if b.lo <= omega && omega <= b.hi {
                return b.height;
            }
        }
        Complex64::new(0.0, 0.0)
    }
}

/// Rectangular spectrum of height 1 on (-omega_c, omega_c): the DTFT of
/// `sin(omega_c n)/(pi n)`. Requires `0 < omega_c < pi`.
pub fn spec_sinc(omega_c: PiRational) -> IdealSpectrum {
    assert!(
        PiRational::ZERO < omega_c && omega_c < PiRational::PI,
        "sinc cutoff must lie strictly inside (0, pi)"
    );
    IdealSpectrum::from_parts(
        vec![Band {
            lo: omega_c.neg(),
            hi: omega_c,
            height: Complex64::new(1.0, 0.0),
        }],
        Vec::new(),
    )
}

/// Flat spectrum of height 1: the DTFT of the unit impulse.
pub fn spec_delta() -> IdealSpectrum {
    IdealSpectrum::from_parts(
        vec![Band {
            lo: PiRational::NEG_PI,
            hi: PiRational::PI,
            height: Complex64::new(1.0, 0.0),
        }],
        Vec::new(),
    )
}

/// Impulse pair for `sin(omega0 n)`: weights -j pi at +omega0 and +j pi at
/// -omega0. Requires `-pi <= omega0 < pi`.
pub fn spec_sinusoid(omega0: PiRational) -> IdealSpectrum {
    assert!(
        PiRational::NEG_PI <= omega0 && omega0 < PiRational::PI,
        "sinusoid frequency must lie in [-pi, pi)"
    );
    IdealSpectrum::from_parts(
        Vec::new(),
        vec![
            Impulse {
                omega: omega0,
                weight: Complex64::new(0.0, -PI),
            },
            Impulse {
                omega: omega0.neg(),
                weight: Complex64::new(0.0, PI),
            },
        ],
    )
}

/// Shifts every band and impulse by pi with wraparound into [-pi, pi): the
/// spectrum of `(-1)^n x[n]`.
pub fn spec_alternate(s: &IdealSpectrum) -> IdealSpectrum {
    let mut bands = Vec::new();
    for b in s.bands() {
        let lo = b.lo.add(PiRational::PI);
        let hi = b.hi.add(PiRational::PI);
        let two_pi = PiRational::new(2, 1);
        if hi <= PiRational::PI {
            bands.push(Band {
                lo,
                hi,
                height: b.height,
            });
        } else if lo >= PiRational::PI {
            bands.push(Band {
                lo: lo.sub(two_pi),
                hi: hi.sub(two_pi),
                height: b.height,
            });
        } else {
            bands.push(Band {
                lo,
                hi: PiRational::PI,
                height: b.height,
            });
            bands.push(Band {
                lo: PiRational::NEG_PI,
                hi: hi.sub(two_pi),
                height: b.height,
            });
        }
    }
    let impulses = s
        .impulses()
        .iter()
        .map(|imp| Impulse {
            omega: imp.omega.shift_pi_wrapped(),
            weight: imp.weight,
        })
        .collect();
    IdealSpectrum::from_parts(bands, impulses)
}

fn partition_combine(
    a: &IdealSpectrum,
    b: &IdealSpectrum,
    combine: impl Fn(Complex64, Complex64) -> Complex64,
) -> Vec<Band> {
    let mut edges: Vec<PiRational> = Vec::new();
    for band in a.bands().iter().chain(b.bands()) {
        edges.push(band.lo);
        edges.push(band.hi);
    }
    edges.sort();
    edges.dedup();
    let mut raw = Vec::new();
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mid = lo.midpoint(hi);
        let ha = a
            .bands()
            .iter()
            .find(|band| band.lo < mid && mid < band.hi)
            .map_or(Complex64::new(0.0, 0.0), |band| band.height);
        let hb = b
            .bands()
            .iter()
            .find(|band| band.lo < mid && mid < band.hi)
            .map_or(Complex64::new(0.0, 0.0), |band| band.height);
        let height = combine(ha, hb);
        if height.norm() != 0.0 {
            raw.push(Band { lo, hi, height });
        }
    }
    canonical_bands(&raw)
}

/// `c1*s1 + c2*s2` with band partitions re-normalized.
pub fn add(s1: &IdealSpectrum, s2: &IdealSpectrum, c1: Complex64, c2: Complex64) -> IdealSpectrum {
    let bands = partition_combine(s1, s2, |a, b| c1 * a + c2 * b);
    let mut impulses: Vec<Impulse> = s1
        .impulses()
        .iter()
        .map(|imp| Impulse {
            omega: imp.omega,
            weight: c1 * imp.weight,
        })
        .collect();
    impulses.extend(s2.impulses().iter().map(|imp| Impulse {
        omega: imp.omega,
        weight: c2 * imp.weight,
    }));
    IdealSpectrum {
        bands,
        impulses: canonical_impulses(&impulses),
    }
}

/// Pointwise product of two spectra: band partitions intersect, an impulse
/// picks up the other factor's band height at its location (edge inclusive),
/// and impulses multiplying to zero are dropped. Two impulses at the same
/// omega make the product divergent.
pub fn multiply(s1: &IdealSpectrum, s2: &IdealSpectrum) -> Result<IdealSpectrum> {
    for i1 in s1.impulses() {
        for i2 in s2.impulses() {
            if i1.omega == i2.omega {
                return Err(Error::DivergentProduct {
                    omega: i1.omega.to_string(),
                });
            }
        }
    }
    let bands = partition_combine(s1, s2, |a, b| a * b);
    let mut impulses = Vec::new();
    for imp in s1.impulses() {
        let h = s2.height_at_inclusive(imp.omega);
        let weight = imp.weight * h;
        if weight.norm() != 0.0 {
            impulses.push(Impulse {
                omega: imp.omega,
                weight,
            });
        }
    }
    for imp in s2.impulses() {
        let h = s1.height_at_inclusive(imp.omega);
        let weight = imp.weight * h;
        if weight.norm() != 0.0 {
            impulses.push(Impulse {
                omega: imp.omega,
                weight,
            });
        }
    }
    Ok(IdealSpectrum {
        bands,
        impulses: canonical_impulses(&impulses),
    })
}

/// Closed-form inverse DTFT sample:
/// bands contribute `h (e^{j hi n} - e^{j lo n}) / (2 pi j n)` for `n != 0`
/// and `h (hi - lo) / (2 pi)` at `n = 0`; impulses contribute
/// `(w / 2 pi) e^{j omega n}`.
pub fn inverse_sample(s: &IdealSpectrum, n: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for b in s.bands() {
        let (lo, hi) = (b.lo.to_radians(), b.hi.to_radians());
        if n == 0 {
            acc += b.height * ((hi - lo) / TAU);
        } else {
            let nf = n as f64;
            let num = Complex64::from_polar(1.0, hi * nf) - Complex64::from_polar(1.0, lo * nf);
            acc += b.height * num / (Complex64::new(0.0, TAU * nf));
        }
    }
    for imp in s.impulses() {
        acc += imp.weight / TAU * Complex64::from_polar(1.0, imp.omega.to_radians() * n as f64);
    }
    acc
}

/// Convolution of the two spectra's time signals, in closed form: inverse
/// samples of `multiply(a, b)` over `n_range` (inclusive).
pub fn convolve_ideal(
    a: &IdealSpectrum,
    b: &IdealSpectrum,
    n_range: std::ops::RangeInclusive<i64>,
) -> Result<Signal> {
    let product = multiply(a, b)?;
    let (start, end) = (*n_range.start(), *n_range.end());
    if start > end {
        return Err(Error::Parameter("empty sample range".into()));
    }
    let samples = (start..=end).map(|n| inverse_sample(&product, n)).collect();
    Ok(Signal::from_complex(samples).with_origin(start))
}

/// Truncated numeric oracle: inverse-samples each factor over |n| <=
/// `truncation` and convolves the two sequences directly. Agreement with the
/// closed form decays like O(1/truncation) on the central region.
pub fn numeric_convolution_oracle(
    a: &IdealSpectrum,
    b: &IdealSpectrum,
    truncation: usize,
) -> Result<Signal> {
    if truncation < 1024 {
        return Err(Error::Parameter(format!(
            "oracle truncation must be >= 1024, got {truncation}"
        )));
    }
    let n = truncation as i64;
    let sample_all = |s: &IdealSpectrum| {
        Signal::from_complex((-n..=n).map(|i| inverse_sample(s, i)).collect()).with_origin(-n)
    };
    Ok(linear_convolve(&sample_all(a), &sample_all(b)))
}

fn fmt_coeff(c: Complex64) -> Option<String> {
    // None means coefficient 1 (omitted)
    if c.im == 0.0 {
        if c.re == 1.0 {
            None
        } else {
            Some(format!("{}", c.re))
        }
    } else {
        Some(format!("({}{:+}j)", c.re, c.im))
    }
}

fn term(coeff: Complex64, body: &str) -> String {
    match fmt_coeff(coeff) {
        None => body.to_string(),
        Some(c) => format!("{c} {body}"),
    }
}

/// Renders the spectrum's inverse as a sum of sinc, modulated-sinc and
/// sinusoid terms, for answer sheets.
///
/// A centered band becomes `sin(w n)/(pi n)`; a symmetric real band pair
/// becomes `2 cos(c n) sin(w n)/(pi n)`; the impulse pair of a sine becomes
/// `sin(omega0 n)`; anything else falls back to a complex-exponential form.
pub fn describe(s: &IdealSpectrum) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<String> = Vec::new();

    let mut used = vec![false; s.bands().len()];
    for i in 0..s.bands().len() {
        if used[i] {
            continue;
        }
        let b = s.bands()[i];
        let center = b.lo.midpoint(b.hi);
        let halfw = b.hi.midpoint(b.lo.neg());
        let sinc_body = format!("sin({})/(pi n)", pi_arg(halfw));
        if center == PiRational::ZERO {
            used[i] = true;
            terms.push(term(b.height, &sinc_body));
            continue;
        }
        // look for the mirrored partner with the same (real) height
        let mirror = (b.hi.neg(), b.lo.neg());
        let partner = s.bands().iter().enumerate().find(|(j, p)| {
            !used[*j] && *j != i && p.lo == mirror.0 && p.hi == mirror.1 && p.height == b.height
        });
        if let (Some((j, _)), true) = (partner, b.height.im == 0.0) {
            used[i] = true;
            used[j] = true;
            let c_abs = if center < PiRational::ZERO {
                center.neg()
            } else {
                center
            };
            let body = format!("cos({}) {}", pi_arg(c_abs), sinc_body);
            terms.push(term(2.0 * b.height, &body));
        } else {
            used[i] = true;
            let body = format!("e^(j {}) {}", pi_arg(center), sinc_body);
            terms.push(term(b.height, &body));
        }
    }

    let imps = s.impulses();
    let mut used_imp = vec![false; imps.len()];
    for i in 0..imps.len() {
        if used_imp[i] {
            continue;
        }
        let a = imps[i];
        let partner = imps.iter().enumerate().find(|(j, p)| {
            !used_imp[*j] && *j != i && p.omega == a.omega.neg()
        });
        if let Some((j, p)) = partner {
            // sin pair: weights -+ j pi s; cos pair: weights pi s both
            let (pos, neg) = if a.omega > p.omega { (a, *p) } else { (*p, a) };
            if (pos.weight + neg.weight).norm() < 1e-30 && pos.weight.re == 0.0 {
                used_imp[i] = true;
                used_imp[j] = true;
                let s_coeff = -pos.weight.im / PI;
                terms.push(term(
                    Complex64::new(s_coeff, 0.0),
                    &format!("sin({})", pi_arg(pos.omega)),
                ));
                continue;
            }
            if pos.weight == neg.weight && pos.weight.im == 0.0 {
                used_imp[i] = true;
                used_imp[j] = true;
                let c_coeff = pos.weight.re / PI;
                terms.push(term(
                    Complex64::new(c_coeff, 0.0),
                    &format!("cos({})", pi_arg(pos.omega)),
                ));
                continue;
            }
        }
        used_imp[i] = true;
        terms.push(term(
            a.weight / TAU,
            &format!("e^(j {})", pi_arg(a.omega)),
        ));
    }

    terms.join(" + ")
}

/// The five bundled convolution exercises as factor pairs, labeled a..e.
pub fn exercises() -> Vec<(char, IdealSpectrum, IdealSpectrum)> {
    let one = Complex64::new(1.0, 0.0);
    let neg = Complex64::new(-1.0, 0.0);
    let sinc = |num, den| spec_sinc(PiRational::new(num, den));
    vec![
        ('a', sinc(1, 4), sinc(1, 8)),
        ('b', sinc(1, 4), add(&sinc(1, 2), &sinc(1, 3), one, neg)),
        ('c', sinc(1, 4), add(&spec_delta(), &sinc(1, 8), one, neg)),
        (
            'd',
            add(&spec_delta(), &sinc(1, 4), one, neg),
            spec_alternate(&sinc(1, 4)),
        ),
        (
            'e',
            spec_alternate(&sinc(2, 3)),
            spec_sinusoid(PiRational::new(1, 4)),
        ),
    ]
}
