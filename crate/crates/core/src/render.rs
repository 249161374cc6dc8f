//! Adjacency-matrix images in the binary portable graymap format.

use thiserror::Error;

use crate::cotree::Cotree;

/// Largest side length accepted by [`render_pgm`].
pub const MAX_RENDER: usize = 1 << 14;

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("image side {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("malformed graymap: {0}")]
    Malformed(String),
}

pub const BLACK: u8 = 0;
pub const WHITE: u8 = 255;

/// Adjacency matrix of the cograph of `t` with vertices in depth-first
/// order of the cotree, as an `n × n` P5 image: black where adjacent.
pub fn render_pgm(t: &Cotree) -> Result<Vec<u8>, RenderError> {
    let n = t.leaf_count();
    if n > MAX_RENDER {
        return Err(RenderError::TooLarge { n, cap: MAX_RENDER });
    }
    let g = t.cograph();
    let idx = t.vertex_indices();
    let order: Vec<usize> = t.leaf_dfs_order(None).into_iter().map(|l| idx[l]).collect();
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    out.reserve(n * n);
    for &a in &order {
        out.extend(order.iter().map(|&b| if g.has_edge(a, b) { BLACK } else { WHITE }));
    }
    Ok(out)
}

/// Decoded P5 image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graymap {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    pub pixels: Vec<u8>,
}

impl Graymap {
    pub fn pixel(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn is_symmetric(&self) -> bool {
        self.width == self.height
            && (0..self.height).all(|i| (0..i).all(|j| self.pixel(i, j) == self.pixel(j, i)))
    }
}

/// Parses an 8-bit P5 image (comments allowed in the header).
pub fn parse_pgm(bytes: &[u8]) -> Result<Graymap, RenderError> {
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(RenderError::Malformed("truncated header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if fields[0] != "P5" {
        return Err(RenderError::Malformed(format!("magic {}", fields[0])));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| RenderError::Malformed(format!("bad number {s}")));
    let (width, height, max_value) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if max_value == 0 || max_value > 255 {
        return Err(RenderError::Malformed(format!("max value {max_value}")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let pixels = bytes.get(pos..).unwrap_or_default().to_vec();
    if pixels.len() != width * height {
        return Err(RenderError::Malformed(format!("{} pixels for {width}×{height}", pixels.len())));
    }
    Ok(Graymap { width, height, max_value: max_value as u16, pixels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn img(s: &str) -> Graymap {
        parse_pgm(&render_pgm(&s.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn k2_and_empty() {
        let k2 = img("(1 1 2)");
        assert_eq!(k2.pixels, vec![WHITE, BLACK, BLACK, WHITE]);
        let empty = img("(0 1 2 3)");
        assert!(empty.pixels.iter().all(|&p| p == WHITE));
        assert_eq!((empty.width, empty.height, empty.max_value), (3, 3, 255));
    }

    #[test]
    fn follows_dfs_order() {
        let m = img("(0 (1 1 2) 3)");
        assert_eq!(m.pixel(0, 1), BLACK);
        assert!((0..3).all(|j| m.pixel(2, j) == WHITE));
        let t: Cotree = "(0 (1 1 4) (1 2 3))".parse().unwrap();
        let g = parse_pgm(&render_pgm(&t).unwrap()).unwrap();
        // order 1, 4, 2, 3: two black 2×2 blocks off the diagonal
        assert_eq!(g.pixel(0, 1), BLACK);
        assert_eq!(g.pixel(2, 3), BLACK);
        assert_eq!(g.pixel(0, 2), WHITE);
    }

    #[test]
    fn malformed_input() {
        assert!(parse_pgm(b"P2\n1 1\n255\n\x00").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\x00").is_err());
        assert!(parse_pgm(b"P5\n# comment\n1 1\n255\n\x00").is_ok());
    }

    proptest! {
        #[test]
        fn round_trip_and_symmetry(seed in 0u64..1000, n in 1usize..40) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let t = crate::sampling::LabeledSampler::new(n).sample(n, false, &mut rng);
            let g = parse_pgm(&render_pgm(&t).unwrap()).unwrap();
            prop_assert!(g.is_symmetric());
            let graph = t.cograph();
            let idx = t.vertex_indices();
            let order: Vec<usize> = t.leaf_dfs_order(None).into_iter().map(|l| idx[l]).collect();
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(g.pixel(i, j) == BLACK, graph.has_edge(order[i], order[j]));
                }
            }
        }
    }
}
