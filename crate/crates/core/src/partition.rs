//! Sub-array partitioning and phase alignment.
//!
//! Array gain depends only on the sine deviation from the alignment direction,
//! so grouping works in 1-D sine space: sort UAVs by departure sine, find the
//! smallest `L` whose sub-array beamwidth covers every group, and align each
//! group at the midpoint of its sine span.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::Float;

use crate::channel::RisGeometry;
use crate::error::{Error, Result};
use crate::geometry::{sin_between, Vec2, Vec3};
use crate::ris::{beamforming_gain, hpbw, phase_ramp};

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub l: usize,
    /// Elements per sub-array, `floor(N / L)`.
    pub n_bar: usize,
    /// UAV indices per group, ascending departure sine.
    pub groups: Vec<Vec<usize>>,
    pub element_ranges: Vec<Range<usize>>,
    pub align_points: Vec<Vec3>,
    /// Per UAV: serving group.
    pub group_of: Vec<usize>,
    /// Per UAV: sine deviation from its group's alignment direction.
    pub delta_phi: Vec<f64>,
}

impl Partition {
    /// Elements that amplify, `L * n_bar`.
    pub fn active_elements(&self) -> usize {
        self.l * self.n_bar
    }

    /// Per-UAV array gain with the sub-array size.
    pub fn gains(&self, spacing_wavelengths: f64) -> Vec<f64> {
        self.delta_phi
            .iter()
            .map(|&d| beamforming_gain(d, self.n_bar, spacing_wavelengths))
            .collect()
    }

    pub fn serving_range(&self, uav: usize) -> Range<usize> {
        self.element_ranges[self.group_of[uav]].clone()
    }
}

/// Sine deviation of `uav` from `align_point`, both seen from the RIS at `[q, H]`.
pub fn delta_phi(q: Vec2, ris: &RisGeometry, align_point: Vec3, uav: Vec3) -> Result<f64> {
    let r = ris.position(q);
    Ok(sin_between(r, uav)? - sin_between(r, align_point)?)
}

/// Virtual point whose departure sine is the midpoint of the group's sine span.
pub fn align_point_for_group(q: Vec2, ris: &RisGeometry, group: &[Vec3]) -> Result<Vec3> {
    if group.is_empty() {
        return Err(Error::Domain("alignment needs a non-empty group"));
    }
    let r = ris.position(q);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut reach = 0.0;
    for &u in group {
        let s = sin_between(r, u)?;
        lo = lo.min(s);
        hi = hi.max(s);
        reach += r.dist(u);
    }
    Ok(point_at_sine(r, 0.5 * (lo + hi), reach / group.len() as f64))
}

fn point_at_sine(r: Vec3, s: f64, reach: f64) -> Vec3 {
    let down = (1.0 - s * s).max(0.0).sqrt();
    Vec3::new(r.x + s * reach, r.y, r.z - down * reach)
}

/// Minimal-`L` contiguous grouping in sine order.
pub fn choose_partition(q: Vec2, ris: &RisGeometry, uavs: &[Vec3]) -> Result<Partition> {
    ris.validate()?;
    if uavs.is_empty() {
        return Err(Error::Domain("partitioning needs at least one UAV"));
    }
    let r = ris.position(q);
    let sines = uavs
        .iter()
        .enumerate()
        .map(|(i, &u)| sin_between(r, u).map_err(|e| e.at_uav(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..uavs.len()).collect();
    order.sort_by(|&a, &b| sines[a].total_cmp(&sines[b]).then(a.cmp(&b)));

    let l_max = uavs.len().min(ris.n);
    for l in 1..=l_max {
        let n_bar = ris.n / l;
        let width = hpbw(n_bar, ris.spacing_wavelengths);
        let mut groups = greedy_cover(&order, &sines, width);
        if groups.len() > l {
            continue;
        }
        while groups.len() < l {
            split_widest(&mut groups, &sines);
        }
        return assemble(q, ris, uavs, &sines, l, n_bar, groups);
    }
    Err(Error::PartitionInfeasible { l_max })
}

/// Fewest contiguous groups whose sine spread is at most `width`.
fn greedy_cover(order: &[usize], sines: &[f64], width: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in order {
        match groups.last_mut() {
            Some(g) if sines[i] - sines[g[0]] <= width => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Splits the widest multi-member group at its largest internal gap.
fn split_widest(groups: &mut Vec<Vec<usize>>, sines: &[f64]) {
    let spread = |g: &Vec<usize>| sines[g[g.len() - 1]] - sines[g[0]];
    let mut pick = None;
    for (gi, g) in groups.iter().enumerate() {
        if g.len() < 2 {
            continue;
        }
        match pick {
            Some(p) if spread(&groups[p]) >= spread(g) => {}
            _ => pick = Some(gi),
        }
    }
    let gi = pick.expect("fewer groups than UAVs leaves a group with two members");
    let g = &groups[gi];
    let mut cut = 1;
    let mut gap = f64::NEG_INFINITY;
    for k in 1..g.len() {
        let d = sines[g[k]] - sines[g[k - 1]];
        if d > gap {
            gap = d;
            cut = k;
        }
    }
    let tail = groups[gi].split_off(cut);
    groups.insert(gi + 1, tail);
}

fn assemble(
    q: Vec2,
    ris: &RisGeometry,
    uavs: &[Vec3],
    sines: &[f64],
    l: usize,
    n_bar: usize,
    groups: Vec<Vec<usize>>,
) -> Result<Partition> {
    let r = ris.position(q);
    let mut group_of = vec![0; uavs.len()];
    let mut delta_phi = vec![0.0; uavs.len()];
    let mut align_points = Vec::with_capacity(l);
    for (gi, g) in groups.iter().enumerate() {
        let members: Vec<Vec3> = g.iter().map(|&i| uavs[i]).collect();
        let p = align_point_for_group(q, ris, &members)?;
        let s_align = sin_between(r, p)?;
        for &i in g {
            group_of[i] = gi;
            delta_phi[i] = sines[i] - s_align;
        }
        align_points.push(p);
    }
    Ok(Partition {
        l,
        n_bar,
        element_ranges: (0..l).map(|i| i * n_bar..(i + 1) * n_bar).collect(),
        groups,
        align_points,
        group_of,
        delta_phi,
    })
}

/// Full-length phase vector and the mask of amplifying elements.
///
/// Each sub-array carries a phase ramp toward its alignment point, indexed
/// from the start of its range. Remainder elements stay idle with phase 0.
pub fn assemble_phases(
    q: Vec2,
    ris: &RisGeometry,
    partition: &Partition,
    theta_bar: f64,
) -> Result<(Vec<f64>, Vec<bool>)> {
    let r = ris.position(q);
    let sin_r = sin_between(r, Vec3::ZERO)?;
    let mut theta = vec![0.0; ris.n];
    let mut active = vec![false; ris.n];
    for (range, &p) in partition.element_ranges.iter().zip(&partition.align_points) {
        if range.end > ris.n {
            return Err(Error::Invariant("sub-array range exceeds the array"));
        }
        let ramp = phase_ramp(range.len(), ris.spacing_wavelengths, sin_between(r, p)? - sin_r, theta_bar);
        for (k, t) in range.clone().zip(ramp) {
            if active[k] {
                return Err(Error::Invariant("overlapping sub-array ranges"));
            }
            active[k] = true;
            theta[k] = t;
        }
    }
    Ok((theta, active))
}
