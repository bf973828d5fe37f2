//! Standard column reduction of the boundary matrix over the two-element
//! field.

use std::collections::HashMap;

use super::diagram::Diagram;
use super::filtration::{Filtration, Simplex};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Persistence diagrams in dimensions `0..=f.homology_dim`.
///
/// Simplices are ordered by `(value, dimension, vertices)`. Zero-persistence
/// pairs are dropped; creators never paired die at `+∞`.
pub fn persistence(f: &Filtration) -> Result<Vec<Diagram>> {
    let top = f.homology_dim;
    let mut order: Vec<usize> = (0..f.simplices.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, va) = &f.simplices[a];
        let (sb, vb) = &f.simplices[b];
        va.total_cmp(vb)
            .then(sa.dim().cmp(&sb.dim()))
            .then_with(|| sa.vertices().cmp(sb.vertices()))
    });
    let sorted: Vec<(Simplex, f64)> = order.iter().map(|&i| f.simplices[i]).collect();
    drop(order);

    let mut position: HashMap<Simplex, u32> = HashMap::with_capacity(sorted.len());
    for (k, (s, v)) in sorted.iter().enumerate() {
        if v.is_nan() {
            return Err(Error::InvalidFiltration(format!(
                "simplex {:?} has NaN value",
                s.vertices()
            )));
        }
        if s.dim() > top + 1 {
            return Err(Error::InvalidFiltration(format!(
                "simplex {:?} exceeds dimension {}",
                s.vertices(),
                top + 1
            )));
        }
        if position.insert(*s, k as u32).is_some() {
            return Err(Error::InvalidFiltration(format!(
                "simplex {:?} listed twice",
                s.vertices()
            )));
        }
    }

    let mut remaining_low = sorted.iter().filter(|(s, _)| s.dim() <= top).count();
    let mut unpaired_top_creators = 0usize;
    // pivot_owner[row] = column whose reduced pivot is row
    let mut pivot_owner: Vec<u32> = vec![NONE; sorted.len()];
    let mut reduced: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut paired = vec![false; sorted.len()];
    let mut diagrams: Vec<Diagram> = (0..=top).map(Diagram::empty).collect();

    for (j, (s, v)) in sorted.iter().enumerate() {
        let dim = s.dim();
        if dim > top && remaining_low == 0 && unpaired_top_creators == 0 {
            // any further column would need an unpaired top creator as pivot
            break;
        }
        let mut column: Vec<u32> = Vec::with_capacity(dim + 1);
        for face in s.facets() {
            match position.get(&face) {
                Some(&p) if (p as usize) < j => column.push(p),
                Some(_) => {
                    return Err(Error::InvalidFiltration(format!(
                        "face {:?} enters after {:?}",
                        face.vertices(),
                        s.vertices()
                    )))
                }
                None => {
                    return Err(Error::InvalidFiltration(format!(
                        "face {:?} of {:?} is missing",
                        face.vertices(),
                        s.vertices()
                    )))
                }
            }
        }
        column.sort_unstable();
        while let Some(&low) = column.last() {
            let owner = pivot_owner[low as usize];
            if owner == NONE {
                break;
            }
            column = symmetric_difference(&column, &reduced[&owner]);
        }
        if dim <= top {
            remaining_low -= 1;
        }
        match column.last() {
            Some(&low) => {
                pivot_owner[low as usize] = j as u32;
                paired[low as usize] = true;
                paired[j] = true;
                let (creator, birth) = sorted[low as usize];
                if creator.dim() == top {
                    unpaired_top_creators -= 1;
                }
                if birth < *v {
                    diagrams[creator.dim()].push(birth, *v);
                }
                reduced.insert(j as u32, column);
            }
            None => {
                if dim == top {
                    unpaired_top_creators += 1;
                }
            }
        }
    }

    for (k, (s, v)) in sorted.iter().enumerate() {
        if s.dim() <= top && !paired[k] {
            diagrams[s.dim()].push(*v, f64::INFINITY);
        }
    }
    for d in &mut diagrams {
        d.sort();
    }
    Ok(diagrams)
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
