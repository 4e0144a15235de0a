//! The planar two-sequence instance family on which DBA needs exponentially
//! many iterations: weighted k-means gadgets chained into two point sequences.

use serde::{Deserialize, Serialize};

use crate::dba::AssignmentMap;
use crate::error::{Error, Result};
use crate::path::WarpingPath;
use crate::sequence::{squared_dist, Instance, PointSequence};

/// Offsets relative to `P_i`, in units of the inner radius `r_i`.
/// `C`, `D` and `S` are 5-decimal approximations.
mod offsets {
    pub const Q: [f64; 2] = [1e-5, 0.0];
    pub const A: [f64; 2] = [1.0, -0.5];
    pub const B: [f64; 2] = [1.0, 0.5];
    pub const C: [f64; 2] = [1.0, 0.70223];
    pub const D: [f64; 2] = [1.0, 1.35739];
    pub const E: [f64; 2] = [0.0, 1.0];
    pub const S: [f64; 2] = [1.0, 0.99607];
}

/// Per-position multiplicities before scaling by `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadgetWeights {
    pub p: usize,
    pub q: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub e: usize,
    pub f: usize,
}

impl Default for GadgetWeights {
    fn default() -> Self {
        GadgetWeights {
            p: 100,
            q: 1,
            a: 400,
            b: 400,
            c: 1100,
            d: 3100,
            e: 27400,
            f: 5000,
        }
    }
}

impl GadgetWeights {
    fn scaled(&self, m: usize) -> GadgetWeights {
        GadgetWeights {
            p: self.p * m,
            q: self.q * m,
            a: self.a * m,
            b: self.b * m,
            c: self.c * m,
            d: self.d * m,
            e: self.e * m,
            f: self.f * m,
        }
    }
}

/// Smallest power-of-two scale at which iteration counts on this family
/// grow by at least 1.5x per added gadget for `g <= 5`.
pub const DEFAULT_SCALE: usize = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetParams {
    /// Integer weight multiplier `M`.
    pub scale: usize,
    /// Number of non-trivial gadgets `g`.
    pub gadgets: usize,
    pub epsilon: f64,
    pub r1: f64,
    pub radius_ratio: f64,
    pub outer_ratio: f64,
    pub weights: GadgetWeights,
}

impl GadgetParams {
    pub fn new(gadgets: usize) -> Self {
        GadgetParams {
            scale: DEFAULT_SCALE,
            gadgets,
            epsilon: 1e-6,
            r1: 1.0,
            radius_ratio: 40.41608,
            outer_ratio: 1.25,
            weights: GadgetWeights::default(),
        }
    }

    pub fn with_scale(mut self, scale: usize) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale == 0 {
            return Err(Error::input("scale M must be at least 1"));
        }
        if !(self.radius_ratio > 1.0) || !(self.outer_ratio > 1.0) || !(self.r1 > 0.0) {
            return Err(Error::input("radii must be positive and ratios above 1"));
        }
        let w = self.scaled_weights();
        if [w.p, w.q, w.a, w.b, w.c, w.d, w.e, w.f].contains(&0) {
            return Err(Error::input("all weights must be positive"));
        }
        if !w.f.is_multiple_of(2) || !w.a.is_multiple_of(2) {
            return Err(Error::input(
                "weights of F and A are split between the sequences and must be even",
            ));
        }
        Ok(())
    }

    pub fn scaled_weights(&self) -> GadgetWeights {
        self.weights.scaled(self.scale)
    }

    /// Mean length: one center for `F`, two per gadget, one for the balance gadget.
    pub fn k(&self, balance: bool) -> usize {
        1 + 2 * self.gadgets + usize::from(balance)
    }
}

/// Coordinates of gadget `G_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetPositions {
    pub index: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub d: [f64; 2],
    pub e: [f64; 2],
    pub s: [f64; 2],
}

fn offset(base: [f64; 2], r: f64, o: [f64; 2]) -> [f64; 2] {
    [base[0] + r * o[0], base[1] + r * o[1]]
}

/// Positions of gadgets `G_1..=G_count`.
pub fn all_gadget_positions(count: usize, params: &GadgetParams) -> Vec<GadgetPositions> {
    let mut out = Vec::with_capacity(count);
    let mut anchor = [0.0, 0.0];
    let mut r = params.r1;
    for index in 1..=count {
        if index > 1 {
            r *= params.radius_ratio;
        }
        let big_r = params.outer_ratio * r;
        let p = [anchor[0] + (1.0 - params.epsilon) * big_r, anchor[1]];
        let g = GadgetPositions {
            index,
            inner_radius: r,
            outer_radius: big_r,
            p,
            q: offset(p, r, offsets::Q),
            a: offset(p, r, offsets::A),
            b: offset(p, r, offsets::B),
            c: offset(p, r, offsets::C),
            d: offset(p, r, offsets::D),
            e: offset(p, r, offsets::E),
            s: offset(p, r, offsets::S),
        };
        anchor = g.s;
        out.push(g);
    }
    out
}

/// Positions of gadget `G_i`, `i >= 1`.
pub fn gadget_positions(i: usize, params: &GadgetParams) -> Result<GadgetPositions> {
    if i == 0 {
        return Err(Error::input("gadget indices start at 1"));
    }
    Ok(all_gadget_positions(i, params).pop().expect("i >= 1"))
}

/// A run of identical points assigned to one mean index.
#[derive(Debug, Clone, Copy)]
struct Block {
    at: [f64; 2],
    count: usize,
    center: usize,
}

fn sequence_blocks(
    params: &GadgetParams,
    gadgets: &[GadgetPositions],
    base: usize,
) -> [Vec<Block>; 2] {
    let w = params.scaled_weights();
    let f = [0.0, 0.0];
    let mut first = vec![Block {
        at: f,
        count: w.f / 2,
        center: base,
    }];
    let mut second = vec![Block {
        at: f,
        count: w.f / 2,
        center: base,
    }];
    for g in gadgets {
        let big = base + 2 * g.index - 1;
        let small = big + 1;
        first.extend([
            Block {
                at: g.e,
                count: w.e,
                center: big,
            },
            Block {
                at: g.d,
                count: w.d,
                center: big,
            },
            Block {
                at: g.c,
                count: w.c,
                center: big,
            },
            Block {
                at: g.b,
                count: w.b,
                center: big,
            },
            Block {
                at: g.a,
                count: w.a / 2,
                center: small,
            },
        ]);
        second.extend([
            Block {
                at: g.p,
                count: w.p,
                center: big,
            },
            Block {
                at: g.q,
                count: w.q,
                center: big,
            },
            Block {
                at: g.a,
                count: w.a / 2,
                center: small,
            },
        ]);
    }
    [first, second]
}

fn block_len(blocks: &[Block]) -> usize {
    blocks.iter().map(|b| b.count).sum()
}

fn materialize(blocks: &[Block]) -> (PointSequence, WarpingPath) {
    let len = block_len(blocks);
    let mut coords = Vec::with_capacity(2 * len);
    let mut pairs = Vec::with_capacity(len);
    for b in blocks {
        for _ in 0..b.count {
            pairs.push((coords.len() / 2, b.center));
            coords.extend_from_slice(&b.at);
        }
    }
    let seq = PointSequence::from_flat(2, coords).expect("gadget coordinates are finite");
    (seq, WarpingPath::from_pairs(pairs))
}

/// The two gadget sequences before length balancing.
pub fn gadget_sequences(params: &GadgetParams) -> Result<(PointSequence, PointSequence)> {
    params.validate()?;
    let gadgets = all_gadget_positions(params.gadgets, params);
    let [first, second] = sequence_blocks(params, &gadgets, 0);
    Ok((materialize(&first).0, materialize(&second).0))
}

/// A generated adversarial instance with its prescribed initial assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetInstance {
    pub params: GadgetParams,
    pub instance: Instance,
    pub k: usize,
    pub initial_assignment: AssignmentMap,
    pub positions: Vec<GadgetPositions>,
    pub f: [f64; 2],
    /// Location of the length-balancing gadget, if one was added.
    pub balance_position: Option<[f64; 2]>,
}

/// Builds the two-sequence instance. With `balance`, a far-away gadget is
/// prepended so both sequences have equal length; without it the lengths
/// must already agree (only the case `g = 0`).
pub fn generate_gadget_instance(params: &GadgetParams, balance: bool) -> Result<GadgetInstance> {
    params.validate()?;
    let gadgets = all_gadget_positions(params.gadgets, params);
    let base = usize::from(balance);
    let [mut first, mut second] = sequence_blocks(params, &gadgets, base);
    let (len1, len2) = (block_len(&first), block_len(&second));
    let balance_position = if balance {
        let outer = gadgets
            .last()
            .map(|g| g.outer_radius)
            .unwrap_or(params.outer_ratio * params.r1);
        let at = [-10.0 * outer, 0.0];
        let (longer, shorter) = if len1 >= len2 {
            (&mut first, &mut second)
        } else {
            (&mut second, &mut first)
        };
        longer.insert(
            0,
            Block {
                at,
                count: 1,
                center: 0,
            },
        );
        shorter.insert(
            0,
            Block {
                at,
                count: len1.abs_diff(len2) + 1,
                center: 0,
            },
        );
        Some(at)
    } else {
        if len1 != len2 {
            return Err(Error::input(format!(
                "gadget sequences have lengths {len1} and {len2}; enable balancing"
            )));
        }
        None
    };
    let (s1, w1) = materialize(&first);
    let (s2, w2) = materialize(&second);
    let m = s1.len();
    let k = params.k(balance);
    Ok(GadgetInstance {
        params: params.clone(),
        instance: Instance::new(vec![s1, s2])?,
        k,
        initial_assignment: AssignmentMap::new(vec![w1, w2], m, k)?,
        positions: gadgets,
        f: [0.0, 0.0],
        balance_position,
    })
}

/// Repeats the whole instance `copies` times (`n' = n * copies`).
pub fn replicate_instance(x: &Instance, copies: usize) -> Result<Instance> {
    if copies == 0 {
        return Err(Error::input("copies must be at least 1"));
    }
    let seqs = x.sequences();
    Instance::new(
        seqs.iter()
            .cycle()
            .take(seqs.len() * copies)
            .cloned()
            .collect(),
    )
}

/// Repeats an assignment map to match [`replicate_instance`].
pub fn replicate_assignment(pi: &AssignmentMap, copies: usize) -> Result<AssignmentMap> {
    if copies == 0 {
        return Err(Error::input("copies must be at least 1"));
    }
    let paths = pi.paths();
    AssignmentMap::new(
        paths
            .iter()
            .cycle()
            .take(paths.len() * copies)
            .cloned()
            .collect(),
        pi.m(),
        pi.k(),
    )
}

/// Largest `|nearest mean index - assigned mean index|` over all assigned pairs.
pub fn max_nearest_index_deviation(
    x: &Instance,
    pi: &AssignmentMap,
    mean: &PointSequence,
) -> usize {
    let mut worst = 0;
    for (seq, w) in x.sequences().iter().zip(pi.paths()) {
        let mut cache: Option<(usize, usize)> = None;
        for &(i, j) in w.pairs() {
            let nearest = match cache {
                Some((ci, near)) if ci == i => near,
                _ => {
                    let p = seq.point(i);
                    let near = (0..mean.len())
                        .min_by(|&a, &b| {
                            squared_dist(p, mean.point(a))
                                .total_cmp(&squared_dist(p, mean.point(b)))
                        })
                        .expect("mean is nonempty");
                    cache = Some((i, near));
                    near
                }
            };
            worst = worst.max(nearest.abs_diff(j));
        }
    }
    worst
}
