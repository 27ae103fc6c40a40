//! Seeded instance generators.
//!
//! Specs have a compact text form, e.g. `random-gnp:n=10,p=3/10,r=4,seed=7`,
//! `star-cluster:k=4,m=2`, `comet-chain:a=1,b=3,count=1`,
//! `bp-adversarial:depth=5`. The same spec always yields the same instance.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `n` nodes, each pair an edge with probability `p_num / p_den`, `r` random terminals.
    RandomGnp {
        n: usize,
        p_num: u32,
        p_den: u32,
        r: usize,
    },
    /// `m` disjoint `k`-stars whose centers are joined by a random spanning tree.
    StarCluster { k: usize, m: usize },
    /// `count` (a,b)-comets whose centers form a path.
    CometChain { a: usize, b: usize, count: usize },
    /// Path of `depth` non-terminals, each with two private terminals. The
    /// greedy finds no proper star and pays `2(2d-1)`; the optimum is `3d-1`.
    BpAdversarial { depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GeneratorSpec { family, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::invalid(m.to_string()));
        match self.family {
            Family::RandomGnp { n, p_num, p_den, r } => {
                if n == 0 {
                    return bad("random-gnp needs n >= 1");
                }
                if r == 0 || r > n {
                    return bad("random-gnp needs 1 <= r <= n");
                }
                if p_den == 0 || p_num > p_den {
                    return bad("random-gnp needs 0 <= p <= 1");
                }
            }
            Family::StarCluster { k, m } => {
                if k == 0 || m == 0 {
                    return bad("star-cluster needs k >= 1 and m >= 1");
                }
            }
            Family::CometChain { a, b, count } => {
                if count == 0 || a + b == 0 {
                    return bad("comet-chain needs count >= 1 and a + b >= 1");
                }
            }
            Family::BpAdversarial { depth } => {
                if depth == 0 {
                    return bad("bp-adversarial needs depth >= 1");
                }
            }
        }
        Ok(())
    }

    /// Nodes and terminals the generated instance will have.
    pub fn declared_size(&self) -> (usize, usize) {
        match self.family {
            Family::RandomGnp { n, r, .. } => (n, r),
            Family::StarCluster { k, m } => (m * (k + 1), m * k),
            Family::CometChain { a, b, count } => (count * (1 + 3 * a + b), count * (2 * a + b)),
            Family::BpAdversarial { depth } => (3 * depth, 2 * depth),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::RandomGnp { n, p_num, p_den, r } => {
                write!(f, "random-gnp:n={n},p={p_num}/{p_den},r={r}")?
            }
            Family::StarCluster { k, m } => write!(f, "star-cluster:k={k},m={m}")?,
            Family::CometChain { a, b, count } => {
                write!(f, "comet-chain:a={a},b={b},count={count}")?
            }
            Family::BpAdversarial { depth } => write!(f, "bp-adversarial:depth={depth}")?,
        }
        write!(f, ",seed={}", self.seed)
    }
}

/// Parses `p` given as `num/den` or as a decimal such as `0.3`.
fn parse_density(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::invalid(format!("invalid density {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        return Ok((
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = 10u32.pow(frac.len() as u32);
    let int: u32 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_val: u32 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let num = int
        .checked_mul(den)
        .and_then(|x| x.checked_add(frac_val))
        .ok_or_else(bad)?;
    Ok((num, den))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: BTreeMap<&str, &str> = BTreeMap::new();
        for kv in rest.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got {kv:?}")))?;
            if params.insert(k.trim(), v.trim()).is_some() {
                return Err(Error::invalid(format!("parameter {k:?} given twice")));
            }
        }
        let mut take = |key: &str| -> Result<usize> {
            let v = params
                .remove(key)
                .ok_or_else(|| Error::invalid(format!("{name} needs parameter {key}")))?;
            v.parse()
                .map_err(|_| Error::invalid(format!("invalid value {v:?} for {key}")))
        };
        let family = match name.trim() {
            "random-gnp" => {
                let n = take("n")?;
                let r = take("r")?;
                let (p_num, p_den) = parse_density(
                    params
                        .remove("p")
                        .ok_or_else(|| Error::invalid("random-gnp needs parameter p"))?,
                )?;
                Family::RandomGnp { n, p_num, p_den, r }
            }
            "star-cluster" => Family::StarCluster {
                k: take("k")?,
                m: take("m")?,
            },
            "comet-chain" => Family::CometChain {
                a: take("a")?,
                b: take("b")?,
                count: take("count")?,
            },
            "bp-adversarial" => Family::BpAdversarial {
                depth: take("depth")?,
            },
            other => {
                return Err(Error::invalid(format!(
                    "unknown generator family {other:?}"
                )))
            }
        };
        let seed = match params.remove("seed") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::invalid(format!("invalid seed {v:?}")))?,
            None => 0,
        };
        if let Some(k) = params.keys().next() {
            return Err(Error::invalid(format!(
                "unknown parameter {k:?} for {name}"
            )));
        }
        let spec = GeneratorSpec { family, seed };
        spec.validate()?;
        Ok(spec)
    }
}

fn shuffled(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    let mut terminals = Vec::new();
    let n = spec.declared_size().0;
    match spec.family {
        Family::RandomGnp { n, p_num, p_den, r } => {
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_ratio(p_num, p_den) {
                        edges.push((u, v));
                    }
                }
            }
            let mut picked = index::sample(&mut rng, n, r).into_vec();
            picked.sort_unstable();
            return Instance::new(n, edges, picked);
        }
        Family::StarCluster { k, m } => {
            // gadget i: center i*(k+1), leaves after it
            let center = |i: usize| i * (k + 1);
            for i in 0..m {
                for j in 1..=k {
                    edges.push((center(i), center(i) + j));
                    terminals.push(center(i) + j);
                }
                if i > 0 {
                    edges.push((center(rng.gen_range(0..i)), center(i)));
                }
            }
        }
        Family::CometChain { a, b, count } => {
            let width = 1 + 3 * a + b;
            for g in 0..count {
                let c = g * width;
                let mut next = c + 1;
                for _ in 0..b {
                    edges.push((c, next));
                    terminals.push(next);
                    next += 1;
                }
                for _ in 0..a {
                    let f = next;
                    edges.extend([(c, f), (f, f + 1), (f, f + 2)]);
                    terminals.extend([f + 1, f + 2]);
                    next += 3;
                }
                if g > 0 {
                    edges.push((c - width, c));
                }
            }
        }
        Family::BpAdversarial { depth } => {
            for i in 0..depth {
                let x = 3 * i;
                edges.extend([(x, x + 1), (x, x + 2)]);
                terminals.extend([x + 1, x + 2]);
                if i > 0 {
                    edges.push((x - 3, x));
                }
            }
        }
    }
    let perm = shuffled(n, &mut rng);
    Instance::new(n, edges, terminals)?.relabel(&perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_text_round_trips() {
        for s in [
            "random-gnp:n=10,p=3/10,r=4,seed=7",
            "star-cluster:k=4,m=1,seed=0",
            "comet-chain:a=1,b=3,count=2,seed=5",
            "bp-adversarial:depth=6,seed=1",
        ] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let dec: GeneratorSpec = "random-gnp:n=10,p=0.3,r=4".parse().unwrap();
        assert_eq!(
            dec.family,
            Family::RandomGnp {
                n: 10,
                p_num: 3,
                p_den: 10,
                r: 4
            }
        );
    }

    #[test]
    fn invalid_specs_rejected() {
        for s in [
            "random-gnp:n=3,p=1/2,r=4",
            "random-gnp:n=3,p=3/2,r=1",
            "random-gnp:n=3,r=1",
            "star-cluster:k=0,m=1",
            "comet-chain:a=0,b=0,count=1",
            "bp-adversarial:depth=0",
            "bp-adversarial:depth=2,extra=1",
            "mystery:x=1",
        ] {
            assert!(s.parse::<GeneratorSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn deterministic_and_sized() {
        let spec: GeneratorSpec = "random-gnp:n=10,p=3/10,r=4,seed=7".parse().unwrap();
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        for s in [
            "random-gnp:n=10,p=3/10,r=4,seed=7",
            "star-cluster:k=3,m=3,seed=2",
            "comet-chain:a=2,b=1,count=2,seed=3",
            "bp-adversarial:depth=4,seed=9",
        ] {
            let spec: GeneratorSpec = s.parse().unwrap();
            let inst = generate(&spec).unwrap();
            let (n, r) = spec.declared_size();
            assert_eq!((inst.node_count(), inst.terminals().len()), (n, r), "{s}");
        }
    }
}
