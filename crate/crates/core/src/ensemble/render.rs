use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::PartitionView;

/// Part colours, used in order of canonical part label and repeated past
/// the end.
pub const PALETTE: [[u8; 3]; 12] = [
    [0x1f, 0x77, 0xb4],
    [0xff, 0x7f, 0x0e],
    [0x2c, 0xa0, 0x2c],
    [0xd6, 0x27, 0x28],
    [0x94, 0x67, 0xbd],
    [0x8c, 0x56, 0x4b],
    [0xe3, 0x77, 0xc2],
    [0x7f, 0x7f, 0x7f],
    [0xbc, 0xbd, 0x22],
    [0x17, 0xbe, 0xcf],
    [0x39, 0x3b, 0x79],
    [0xad, 0x49, 0x4a],
];

const BACKGROUND: [u8; 3] = [0xff, 0xff, 0xff];

/// Integer cell of every vertex: coordinates rounded, shifted to start at 0.
fn cells(g: &Graph, p: &PartitionView) -> Result<(Vec<(usize, usize)>, usize, usize)> {
    let coords = g
        .coords()
        .ok_or_else(|| Error::UnsupportedGraph("rendering needs vertex coordinates".into()))?;
    if p.n() != g.n() {
        return Err(Error::InvalidArgument(
            "partition and graph sizes differ".into(),
        ));
    }
    let min_x = coords.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let min_y = coords.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let cells: Vec<(usize, usize)> = coords
        .iter()
        .map(|&(x, y)| ((x - min_x).round() as usize, (y - min_y).round() as usize))
        .collect();
    let w = cells.iter().map(|c| c.0).max().unwrap_or(0) + 1;
    let h = cells.iter().map(|c| c.1).max().unwrap_or(0) + 1;
    Ok((cells, w, h))
}

/// Binary PPM with one `cell`-pixel square per vertex.
pub fn render_ppm(g: &Graph, p: &PartitionView, cell: u32) -> Result<Vec<u8>> {
    let (cells, w, h) = cells(g, p)?;
    let cell = cell as usize;
    let (pw, ph) = (w * cell, h * cell);
    let mut pixels = vec![BACKGROUND; pw * ph];
    for (v, &(cx, cy)) in cells.iter().enumerate() {
        let colour = PALETTE[p.assignment()[v] % PALETTE.len()];
        for y in cy * cell..(cy + 1) * cell {
            pixels[y * pw + cx * cell..y * pw + (cx + 1) * cell].fill(colour);
        }
    }
    let mut out = format!("P6\n{pw} {ph}\n255\n").into_bytes();
    out.extend(pixels.into_iter().flatten());
    Ok(out)
}

pub fn render_svg(g: &Graph, p: &PartitionView, cell: u32) -> Result<String> {
    let (cells, w, h) = cells(g, p)?;
    let assign = p.assignment();
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" shape-rendering=\"crispEdges\">\n",
        w as u32 * cell,
        h as u32 * cell
    );
    for (v, &(cx, cy)) in cells.iter().enumerate() {
        let [r, gr, b] = PALETTE[assign[v] % PALETTE.len()];
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{cell}\" height=\"{cell}\" fill=\"#{r:02x}{gr:02x}{b:02x}\"/>\n",
            cx as u32 * cell,
            cy as u32 * cell
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes an SVG for a `.svg` path and a PPM otherwise.
pub fn render_partition(g: &Graph, p: &PartitionView, path: &Path, cell: u32) -> Result<()> {
    let bytes = match path.extension().and_then(|e| e.to_str()) {
        Some("svg") => render_svg(g, p, cell)?.into_bytes(),
        _ => render_ppm(g, p, cell)?,
    };
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn two_by_two() {
        let g = graph::grid(2, 2).unwrap();
        let p = PartitionView::parse(4, "0,1|2,3").unwrap();
        let img = render_ppm(&g, &p, 1).unwrap();
        let header = b"P6\n2 2\n255\n";
        assert_eq!(&img[..header.len()], header);
        let px: Vec<&[u8]> = img[header.len()..].chunks(3).collect();
        assert_eq!(px.len(), 4);
        assert_eq!(
            px,
            vec![&PALETTE[0][..], &PALETTE[0], &PALETTE[1], &PALETTE[1]]
        );
        let svg = render_svg(&g, &p, 5).unwrap();
        assert_eq!(svg.matches("<rect").count(), 4);
        assert_eq!(svg.matches("#1f77b4").count(), 2);
        assert_eq!(svg.matches("#ff7f0e").count(), 2);
    }

    #[test]
    fn needs_coordinates() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let p = PartitionView::parse(2, "0|1").unwrap();
        assert!(matches!(
            render_ppm(&g, &p, 2),
            Err(Error::UnsupportedGraph(_))
        ));
    }

    #[test]
    fn files_are_reproducible() {
        let g = graph::grid(4, 5).unwrap();
        let p =
            PartitionView::parse(20, "0,1,2,5,6,7,10,11,12,15,16,17|3,4,8,9,13,14,18,19").unwrap();
        let dir = tempfile::tempdir().unwrap();
        for name in ["a.ppm", "a.svg"] {
            let (x, y) = (dir.path().join(name), dir.path().join(format!("b-{name}")));
            render_partition(&g, &p, &x, 3).unwrap();
            render_partition(&g, &p, &y, 3).unwrap();
            assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap());
        }
        let ppm = std::fs::read(dir.path().join("a.ppm")).unwrap();
        assert_eq!(ppm.len(), b"P6\n15 12\n255\n".len() + 15 * 12 * 3);
    }
}
