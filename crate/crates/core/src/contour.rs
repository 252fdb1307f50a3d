//! Marching-squares boundary extraction for 2-D scalar fields.

use crate::reachset::ScalarField;

/// A polyline in data coordinates; closed when first and last points match.
pub type Polyline = Vec<(f64, f64)>;

/// Extract the level-set boundary of `field.values == level` as chained
/// polylines, with linear interpolation along cell edges.
///
/// When `framed` is set, everything outside the lattice counts as above the
/// level, which closes contours of sublevel sets that touch the border.
pub fn extract_contours(field: &ScalarField, level: f64, framed: bool) -> Vec<Polyline> {
    assert_eq!(field.dim(), 2, "marching squares needs a 2-D field");
    let n = field.grid_n;
    let big = level.abs().max(1.0) * 1e9;
    // Nudge exact-level lattice values above the level. A value exactly on
    // the level would put crossings on lattice points shared by four cells,
    // which breaks the segment chaining into spurious open paths.
    let nudge = (level.abs().max(1.0)) * 1e-12;
    let value = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i as usize >= n || j as usize >= n {
            if framed {
                level + big
            } else {
                f64::NAN
            }
        } else {
            let v = field.value_2d(i as usize, j as usize);
            if v == level {
                level + nudge
            } else {
                v
            }
        }
    };
    let coord = |axis: usize, idx: isize| -> f64 {
        let (lo, hi) = field.bounds[axis];
        let step = (hi - lo) / (n - 1) as f64;
        lo + step * idx as f64
    };

    let range = if framed { -1..n as isize } else { 0..(n as isize - 1) };
    let mut segments: Vec<((f64, f64), (f64, f64))> = Vec::new();
    for i in range.clone() {
        for j in range.clone() {
            let v00 = value(i, j);
            let v10 = value(i + 1, j);
            let v01 = value(i, j + 1);
            let v11 = value(i + 1, j + 1);
            if [v00, v10, v01, v11].iter().any(|v| v.is_nan()) {
                continue;
            }
            // interpolated crossing on an edge from a to b
            let lerp = |va: f64, vb: f64| -> f64 {
                let d = vb - va;
                if d == 0.0 {
                    0.5
                } else {
                    ((level - va) / d).clamp(0.0, 1.0)
                }
            };
            let x0 = coord(0, i);
            let x1 = coord(0, i + 1);
            let y0 = coord(1, j);
            let y1 = coord(1, j + 1);
            // edge midpoints at interpolated crossings
            let bottom = (x0 + (x1 - x0) * lerp(v00, v10), y0);
            let top = (x0 + (x1 - x0) * lerp(v01, v11), y1);
            let left = (x0, y0 + (y1 - y0) * lerp(v00, v01));
            let right = (x1, y0 + (y1 - y0) * lerp(v10, v11));

            let mut case = 0u8;
            if v00 > level {
                case |= 1;
            }
            if v10 > level {
                case |= 2;
            }
            if v11 > level {
                case |= 4;
            }
            if v01 > level {
                case |= 8;
            }
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((bottom, left)),
                2 | 13 => segments.push((right, bottom)),
                3 | 12 => segments.push((right, left)),
                4 | 11 => segments.push((top, right)),
                5 => {
                    segments.push((bottom, right));
                    segments.push((top, left));
                }
                6 | 9 => segments.push((top, bottom)),
                7 | 8 => segments.push((top, left)),
                10 => {
                    segments.push((bottom, left));
                    segments.push((top, right));
                }
                _ => unreachable!(),
            }
        }
    }
    chain(segments)
}

fn close_enough(a: (f64, f64), b: (f64, f64)) -> bool {
    let eps = 1e-9;
    (a.0 - b.0).abs() < eps && (a.1 - b.1).abs() < eps
}

/// Chain raw segments into polylines by matching endpoints. Values grazing
/// the level at a lattice point produce micro segments; those merge into
/// their neighbors (closure needs at least 3 points) and any leftover loop
/// smaller than numerical noise is dropped.
fn chain(mut segments: Vec<((f64, f64), (f64, f64))>) -> Vec<Polyline> {
    let mut out = Vec::new();
    while let Some((start, end)) = segments.pop() {
        let mut path = vec![start, end];
        loop {
            let tail = *path.last().unwrap();
            if path.len() > 2 && close_enough(tail, path[0]) {
                break;
            }
            match segments
                .iter()
                .position(|(s, e)| close_enough(*s, tail) || close_enough(*e, tail))
            {
                Some(idx) => {
                    let (s, e) = segments.swap_remove(idx);
                    path.push(if close_enough(s, tail) { e } else { s });
                }
                None => {
                    // try extending backwards from the head
                    let head = path[0];
                    match segments
                        .iter()
                        .position(|(s, e)| close_enough(*s, head) || close_enough(*e, head))
                    {
                        Some(idx) => {
                            let (s, e) = segments.swap_remove(idx);
                            path.insert(0, if close_enough(s, head) { e } else { s });
                        }
                        None => break,
                    }
                }
            }
        }
        if diameter(&path) > 1e-8 {
            out.push(path);
        }
    }
    out
}

fn diameter(path: &[(f64, f64)]) -> f64 {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in path {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    (hi.0 - lo.0).max(hi.1 - lo.1)
}
