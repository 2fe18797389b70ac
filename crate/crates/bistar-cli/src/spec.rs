//! Parsers for the CLI's little languages: complex numbers, Schwarz-function
//! specs, alpha sweeps, and function references.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bistar::catalog::AnalyticFunction;
use bistar::schwarz::{
    generate_inverse_starlike, generate_starlike, generate_v, GeneratorConfig, SchwarzFunction,
};

/// Complex literal: `2`, `-0.5`, `0.3+0.2i`, `-0.2i`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<Complex<f64>> {
    let s = s.trim();
    if s.is_empty() {
        bail!("empty complex literal");
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // find the split between the real part and the imaginary coefficient
        let mut split = None;
        for (idx, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !matches!(&body[idx - 1..idx], "e" | "E") {
                split = Some(idx);
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .with_context(|| format!("bad imaginary part in '{s}'"))?,
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            re_str
                .parse::<f64>()
                .with_context(|| format!("bad real part in '{s}'"))?
        };
        Ok(Complex::new(re, im))
    } else {
        Ok(Complex::new(
            s.parse::<f64>()
                .with_context(|| format!("bad real literal '{s}'"))?,
            0.0,
        ))
    }
}

/// Schwarz-function spec:
/// `0` | `z` | `z^k` | `blaschke:a1,a2[:eta]` | `z^k*blaschke:...` | `random`.
pub fn parse_phi(s: &str, seed: u64) -> Result<SchwarzFunction<f64>> {
    let s = s.trim();
    if s == "0" {
        return Ok(SchwarzFunction::zero());
    }
    if s == "random" {
        return Ok(random_phi(seed, 1));
    }
    if s == "random2" {
        return Ok(random_phi(seed, 2));
    }

    let (monomial, blaschke) = match s.split_once('*') {
        Some((m, b)) => (Some(m), Some(b)),
        None if s.starts_with("blaschke:") => (None, Some(s)),
        None => (Some(s), None),
    };

    let power = match monomial {
        None => 1,
        Some("z") => 1,
        Some(m) => {
            let k = m
                .strip_prefix("z^")
                .ok_or_else(|| anyhow!("bad monomial '{m}' in phi spec (expected z or z^k)"))?;
            k.parse::<usize>()
                .with_context(|| format!("bad power in '{m}'"))?
        }
    };

    let (zeros, eta) = match blaschke {
        None => (Vec::new(), Complex::new(1.0, 0.0)),
        Some(b) => {
            let body = b
                .strip_prefix("blaschke:")
                .ok_or_else(|| anyhow!("bad Blaschke part '{b}' in phi spec"))?;
            let mut pieces = body.split(':');
            let zeros_str = pieces.next().unwrap_or("");
            let eta = match pieces.next() {
                Some(e) => parse_complex(e)?,
                None => Complex::new(1.0, 0.0),
            };
            if pieces.next().is_some() {
                bail!("too many ':' sections in phi spec '{s}'");
            }
            let zeros = zeros_str
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(parse_complex)
                .collect::<Result<Vec<_>>>()?;
            (zeros, eta)
        }
    };
    Ok(SchwarzFunction::new(power, zeros, eta)?)
}

/// Seeded random Blaschke-form Schwarz function with vanishing order at
/// least `min_power`.
pub fn random_phi(seed: u64, min_power: usize) -> SchwarzFunction<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let power = min_power + rng.gen_range(0..2usize);
    let n_zeros = rng.gen_range(0..=3usize);
    let zeros: Vec<Complex<f64>> = (0..n_zeros)
        .map(|_| {
            let r = 0.7 * rng.gen::<f64>().sqrt();
            let t = std::f64::consts::TAU * rng.gen::<f64>();
            Complex::from_polar(r, t)
        })
        .collect();
    let eta = Complex::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>());
    SchwarzFunction::new(power, zeros, eta).expect("random parameters are in range")
}

/// Alpha sweep: single value, comma list, or `start:stop:step` (inclusive
/// of start, exclusive of stop).
pub fn parse_alphas(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("sweep must be start:stop:step, got '{s}'");
        }
        let start: f64 = parts[0].parse().context("bad sweep start")?;
        let stop: f64 = parts[1].parse().context("bad sweep stop")?;
        let step: f64 = parts[2].parse().context("bad sweep step")?;
        if step <= 0.0 {
            bail!("sweep step must be positive");
        }
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let v = start + step * k as f64;
            if v >= stop - 1e-12 {
                break;
            }
            out.push(v);
            k += 1;
        }
        if out.is_empty() {
            bail!("empty sweep '{s}'");
        }
        Ok(out)
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().context("bad alpha"))
            .collect()
    }
}

/// Serialized generated-function description; enough to rebuild the
/// evaluator exactly.
#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct GeneratedSpec {
    pub schema_version: u32,
    pub class: String,
    pub alpha: f64,
    pub phi: String,
    pub order: usize,
    pub coefficients: Vec<[f64; 2]>,
}

pub fn generate_by_class(
    class: &str,
    alpha: f64,
    phi: &SchwarzFunction<f64>,
    cfg: &GeneratorConfig<f64>,
) -> Result<AnalyticFunction<f64>> {
    Ok(match class {
        "starlike" => generate_starlike(alpha, phi, cfg)?,
        "inv-starlike" => generate_inverse_starlike(alpha, phi, cfg)?,
        "v" => generate_v(alpha, phi, cfg)?,
        other => bail!("unknown class '{other}' (expected starlike, inv-starlike, or v)"),
    })
}

/// Function reference: a catalog name (`koebe`, `f1`, `gen_koebe:0.25`, ...)
/// or a path to a JSON file emitted by `generate`.
pub fn resolve_function(
    spec: &str,
    alpha: Option<f64>,
    gen_cfg: &GeneratorConfig<f64>,
    seed: u64,
) -> Result<AnalyticFunction<f64>> {
    if spec.ends_with(".json") || std::path::Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)
            .with_context(|| format!("cannot read function file '{spec}'"))?;
        let loaded: GeneratedSpec =
            serde_json::from_str(&text).with_context(|| format!("bad function file '{spec}'"))?;
        let phi = parse_phi(&loaded.phi, seed)?;
        return generate_by_class(&loaded.class, loaded.alpha, &phi, gen_cfg);
    }
    Ok(AnalyticFunction::by_name(spec, alpha)?)
}
