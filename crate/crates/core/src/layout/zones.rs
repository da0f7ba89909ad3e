//! Bottom-left packing of asset zones inside a room, on the layout grid.

use super::partition::IRect;

/// Packs `sizes` (width, depth in cells) into `free`, avoiding `blocked`.
/// Larger footprints go first. Each zone may be turned by 90 degrees. Returns
/// `(index, rect)` for the packed sizes and the indices that did not fit.
pub fn pack_zones(free: IRect, blocked: &[IRect], sizes: &[(i64, i64)]) -> (Vec<(usize, IRect)>, Vec<usize>) {
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sizes[i].0 * sizes[i].1));

    let mut placed: Vec<(usize, IRect)> = Vec::new();
    let mut unfit = Vec::new();
    if free.width() <= 0 || free.height() <= 0 {
        return (placed, order);
    }
    for i in order {
        let (w, d) = sizes[i];
        let mut best: Option<IRect> = None;
        'orient: for (a, b) in [(w, d), (d, w)] {
            // corners of obstacles and of the free area, for both alignments
            let mut xs = vec![free.x0, free.x1 - a];
            let mut ys = vec![free.y0, free.y1 - b];
            for r in blocked.iter().chain(placed.iter().map(|(_, r)| r)) {
                xs.extend([r.x1, r.x0 - a]);
                ys.extend([r.y1, r.y0 - b]);
            }
            xs.sort_unstable();
            xs.dedup();
            ys.sort_unstable();
            ys.dedup();
            for &y in &ys {
                for &x in &xs {
                    let cand = IRect::new(x, y, x + a, y + b);
                    if best.is_some_and(|r| (r.y0, r.x0) <= (y, x)) {
                        continue 'orient;
                    }
                    let inside = cand.x0 >= free.x0 && cand.y0 >= free.y0 && cand.x1 <= free.x1 && cand.y1 <= free.y1;
                    if inside
                        && !blocked.iter().any(|o| o.overlaps(&cand))
                        && !placed.iter().any(|(_, o)| o.overlaps(&cand))
                    {
                        best = Some(cand);
                        continue 'orient;
                    }
                }
            }
        }
        match best {
            Some(r) => placed.push((i, r)),
            None => unfit.push(i),
        }
    }
    placed.sort_by_key(|(i, _)| *i);
    unfit.sort_unstable();
    (placed, unfit)
}
