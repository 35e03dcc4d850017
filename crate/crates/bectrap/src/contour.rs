//! Level-set extraction on regular 2D grids (marching squares with linear
//! interpolation) and simple polygon predicates.
//!
//! Grids may be periodic in `x`: the field is then treated as living on a
//! cylinder and curves are stitched across the seam, coming back either as
//! closed loops or as curves that wrap the cylinder once (or more). Curve
//! coordinates are unwrapped in `x` so consumers can reason about winding.

use std::collections::HashMap;

/// One connected component of a level set.
#[derive(Debug, Clone)]
pub struct Curve {
    /// Vertices; for closed curves the first vertex is not repeated.
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
    /// Net number of `x`-periods traversed (0 for plain loops).
    pub x_winding: i32,
}

/// Extract all level curves of `values` (x-major, `values[ix * ny + iy]`) at
/// `level`. With `period = Some(p)` the x-axis is periodic with period `p`
/// (the grid covers one period without repeating the seam column).
pub fn level_curves(
    xs: &[f64],
    ys: &[f64],
    values: &[f64],
    level: f64,
    period: Option<f64>,
) -> Vec<Curve> {
    let nx = xs.len();
    let ny = ys.len();
    assert_eq!(values.len(), nx * ny, "field size mismatch");
    assert!(nx >= 2 && ny >= 2, "need at least a 2x2 grid");

    // Periodic fields get one extra column that copies column 0 at x0 + p.
    let (xs_ext, val, ncol): (Vec<f64>, Vec<f64>, usize) = match period {
        Some(p) => {
            let mut x2 = xs.to_vec();
            x2.push(xs[0] + p);
            let mut v2 = values.to_vec();
            v2.extend_from_slice(&values[0..ny]);
            (x2, v2, nx + 1)
        }
        None => (xs.to_vec(), values.to_vec(), nx),
    };

    let segments = march(&xs_ext, ys, &val, ncol, ny, level);
    let pieces = chain_segments(segments);
    match period {
        Some(p) => stitch_periodic(pieces, xs_ext[0], xs_ext[ncol - 1], p),
        None => pieces
            .into_iter()
            .map(|(points, closed)| Curve {
                points,
                closed,
                x_winding: 0,
            })
            .collect(),
    }
}

type Segment = ((f64, f64), (f64, f64));

fn march(xs: &[f64], ys: &[f64], v: &[f64], nx: usize, ny: usize, level: f64) -> Vec<Segment> {
    let at = |ix: usize, iy: usize| v[ix * ny + iy];
    let mut segments = Vec::new();
    for ix in 0..nx - 1 {
        for iy in 0..ny - 1 {
            let v00 = at(ix, iy);
            let v10 = at(ix + 1, iy);
            let v11 = at(ix + 1, iy + 1);
            let v01 = at(ix, iy + 1);
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
            if case == 0 || case == 15 {
                continue;
            }
            // Edge crossings, each computed from its nodes in a fixed order so
            // that shared edges of adjacent cells produce bit-identical points.
            let bottom = || {
                let t = (level - v00) / (v10 - v00);
                (xs[ix] + t * (xs[ix + 1] - xs[ix]), ys[iy])
            };
            let top = || {
                let t = (level - v01) / (v11 - v01);
                (xs[ix] + t * (xs[ix + 1] - xs[ix]), ys[iy + 1])
            };
            let left = || {
                let t = (level - v00) / (v01 - v00);
                (xs[ix], ys[iy] + t * (ys[iy + 1] - ys[iy]))
            };
            let right = || {
                let t = (level - v10) / (v11 - v10);
                (xs[ix + 1], ys[iy] + t * (ys[iy + 1] - ys[iy]))
            };
            match case {
                1 => segments.push((left(), bottom())),
                2 => segments.push((bottom(), right())),
                3 => segments.push((left(), right())),
                4 => segments.push((top(), right())),
                6 => segments.push((bottom(), top())),
                7 => segments.push((left(), top())),
                8 => segments.push((left(), top())),
                9 => segments.push((bottom(), top())),
                11 => segments.push((top(), right())),
                12 => segments.push((left(), right())),
                13 => segments.push((bottom(), right())),
                14 => segments.push((left(), bottom())),
                5 | 10 => {
                    let center_inside = 0.25 * (v00 + v10 + v11 + v01) > level;
                    let diag_bl_tr = case == 5;
                    if center_inside == diag_bl_tr {
                        // Inside region connects diagonally: hug the two
                        // outside corners.
                        segments.push((left(), top()));
                        segments.push((bottom(), right()));
                    } else {
                        segments.push((left(), bottom()));
                        segments.push((top(), right()));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    segments
}

fn key(p: (f64, f64)) -> (u64, u64) {
    (p.0.to_bits(), p.1.to_bits())
}

/// Join segments sharing endpoints into polylines. Returns (points, closed).
fn chain_segments(segments: Vec<Segment>) -> Vec<(Vec<(f64, f64)>, bool)> {
    let mut by_endpoint: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (i, seg) in segments.iter().enumerate() {
        by_endpoint.entry(key(seg.0)).or_default().push(i);
        by_endpoint.entry(key(seg.1)).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();

    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut points = std::collections::VecDeque::new();
        points.push_back(segments[start].0);
        points.push_back(segments[start].1);

        // Grow at the back, then at the front.
        for front in [false, true] {
            loop {
                let tip = if front {
                    *points.front().unwrap()
                } else {
                    *points.back().unwrap()
                };
                let other_tip = if front {
                    *points.back().unwrap()
                } else {
                    *points.front().unwrap()
                };
                if points.len() > 2 && key(tip) == key(other_tip) {
                    break; // closed
                }
                let Some(candidates) = by_endpoint.get(&key(tip)) else {
                    break;
                };
                let Some(&next) = candidates.iter().find(|&&i| !used[i]) else {
                    break;
                };
                used[next] = true;
                let (a, b) = segments[next];
                let far = if key(a) == key(tip) { b } else { a };
                if front {
                    points.push_front(far);
                } else {
                    points.push_back(far);
                }
            }
        }
        let mut pts: Vec<_> = points.into();
        let closed = pts.len() > 3 && key(pts[0]) == key(*pts.last().unwrap());
        if closed {
            pts.pop();
        }
        curves.push((pts, closed));
    }
    curves
}

/// Stitch open pieces of a periodic field across the seam.
///
/// The extended grid duplicates column 0 at `x_right = x_left + period`, so
/// every crossing of the seam shows up twice: once on each boundary column,
/// at bit-identical `y`. Pieces form a graph whose edges connect a
/// right-boundary endpoint to the left-boundary endpoint with the same `y`;
/// walking that graph yields either open chains (ends on the `y` boundary)
/// or cycles. A cycle's net seam crossings give its winding number.
fn stitch_periodic(
    pieces: Vec<(Vec<(f64, f64)>, bool)>,
    x_left: f64,
    x_right: f64,
    period: f64,
) -> Vec<Curve> {
    let mut curves = Vec::new();
    let mut open: Vec<Vec<(f64, f64)>> = Vec::new();
    for (pts, closed) in pieces {
        if closed {
            curves.push(Curve {
                points: pts,
                closed: true,
                x_winding: 0,
            });
        } else {
            open.push(pts);
        }
    }

    // endpoint (piece, end) for each seam crossing, keyed by y bits.
    let mut left_map: HashMap<u64, (usize, usize)> = HashMap::new();
    let mut right_map: HashMap<u64, (usize, usize)> = HashMap::new();
    for (i, pts) in open.iter().enumerate() {
        for (end, pt) in [(0usize, pts[0]), (1usize, *pts.last().unwrap())] {
            if pt.0 == x_left {
                left_map.insert(pt.1.to_bits(), (i, end));
            } else if pt.0 == x_right {
                right_map.insert(pt.1.to_bits(), (i, end));
            }
        }
    }
    // Partner of an endpoint on the other side of the seam, with the winding
    // step taken when crossing there.
    let endpoint = |piece: usize, end: usize| -> (f64, f64) {
        if end == 0 {
            open[piece][0]
        } else {
            *open[piece].last().unwrap()
        }
    };
    let partner = |piece: usize, end: usize| -> Option<(usize, usize, i32)> {
        let pt = endpoint(piece, end);
        if pt.0 == x_right {
            left_map.get(&pt.1.to_bits()).map(|&(q, e)| (q, e, 1))
        } else if pt.0 == x_left {
            right_map.get(&pt.1.to_bits()).map(|&(q, e)| (q, e, -1))
        } else {
            None
        }
    };

    let mut visited = vec![false; open.len()];
    for start in 0..open.len() {
        if visited[start] {
            continue;
        }
        // Walk backwards from (start, enter=0) to find the chain head: an
        // entry endpoint with no partner, or the starting state again (cycle).
        let mut head = (start, 0usize);
        let mut guard = 0usize;
        while let Some((q, qe, _)) = partner(head.0, head.1) {
            let prev = (q, 1 - qe); // q is exited at qe, so entered at 1 - qe
            guard += 1;
            if prev == (start, 0) || guard > open.len() + 1 {
                head = (start, 0);
                break;
            }
            head = prev;
        }

        // Forward walk, materializing coordinates with cumulative shifts.
        let mut points: Vec<(f64, f64)> = Vec::new();
        let mut winding = 0i32;
        let mut closed = false;
        let (mut piece, mut enter) = head;
        loop {
            visited[piece] = true;
            let shift = winding as f64 * period;
            let pts = &open[piece];
            let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if enter == 0 {
                Box::new(pts.iter())
            } else {
                Box::new(pts.iter().rev())
            };
            for (k, &(x, y)) in iter.enumerate() {
                if k == 0 && !points.is_empty() {
                    continue; // seam vertex duplicates the previous exit point
                }
                points.push((x + shift, y));
            }
            let exit = 1 - enter;
            match partner(piece, exit) {
                None => break,
                Some((q, qe, dw)) => {
                    winding += dw;
                    if (q, qe) == head {
                        closed = true;
                        points.pop(); // duplicate of the head vertex
                        break;
                    }
                    if visited[q] {
                        break; // defensive: malformed input
                    }
                    piece = q;
                    enter = qe;
                }
            }
        }
        curves.push(Curve {
            points,
            closed,
            x_winding: if closed { winding } else { 0 },
        });
    }
    curves
}

/// Closed polygon (implicitly closing last -> first vertex).
#[derive(Debug, Clone)]
pub struct Polygon {
    points: Vec<(f64, f64)>,
}

impl Polygon {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        assert!(points.len() >= 3, "polygon needs at least 3 vertices");
        Self { points }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Shoelace area (non-negative).
    pub fn area(&self) -> f64 {
        let n = self.points.len();
        let mut acc = 0.0;
        for i in 0..n {
            let (x0, y0) = self.points[i];
            let (x1, y1) = self.points[(i + 1) % n];
            acc += x0 * y1 - x1 * y0;
        }
        0.5 * acc.abs()
    }

    /// Winding-number point test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let n = self.points.len();
        let mut wn = 0i32;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let is_left = (b.0 - a.0) * (y - a.1) - (x - a.0) * (b.1 - a.1);
            if a.1 <= y {
                if b.1 > y && is_left > 0.0 {
                    wn += 1;
                }
            } else if b.1 <= y && is_left < 0.0 {
                wn -= 1;
            }
        }
        wn != 0
    }

    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for &(x, y) in &self.points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        (min_x, max_x, min_y, max_y)
    }
}
