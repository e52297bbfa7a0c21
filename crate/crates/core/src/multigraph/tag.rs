use std::fmt;
use std::str::FromStr;

use crate::seq::BinarySeq;

use super::GraphError;

/// Which child of a lexicographic-tree vertex a step descends into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// Root-to-vertex path inside a lexicographic tree, e.g. `LR`.
/// The empty path is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexPath(Vec<Side>);

impl LexPath {
    pub fn root() -> Self {
        LexPath(Vec::new())
    }

    pub fn child(&self, side: Side) -> Self {
        let mut steps = self.0.clone();
        steps.push(side);
        LexPath(steps)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `depth` steps.
    pub fn prefix(&self, depth: usize) -> LexPath {
        LexPath(self.0[..depth.min(self.0.len())].to_vec())
    }

    pub fn steps(&self) -> &[Side] {
        &self.0
    }

    /// Path of the `index`-th leaf (0-based, left to right) at `depth`.
    pub fn of_leaf(index: usize, depth: usize) -> LexPath {
        LexPath(
            (0..depth)
                .rev()
                .map(|b| if (index >> b) & 1 == 0 { Side::Left } else { Side::Right })
                .collect(),
        )
    }
}

impl fmt::Display for LexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Side::Left => "L",
                Side::Right => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for LexPath {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'L' => Ok(Side::Left),
                'R' => Ok(Side::Right),
                _ => Err(GraphError::BadTag(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(LexPath)
    }
}

/// Provenance of a vertex in a constructed graph.
///
/// Tags are metadata only: equivalence testing never looks at them.
///
/// Text form: `U(0110)`, `V(2,0)`, `Y(0110,1)`, `Z(0110,3)`, `X(4)` and
/// `L(2,0,LR)` for a lexicographic-tree internal vertex (`L(2,-,LR)` when
/// the tree has no fixed `h`). `Anonymous` has no text form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexTag {
    #[default]
    Anonymous,
    /// Hub `u_w` of sequence `w`.
    U(BinarySeq),
    /// Position vertex `v_{i,h}` (root of a lexicographic tree in the binary construction).
    V { pos: usize, h: u8 },
    /// Spine vertex `y_{w,k}` of a caterpillar.
    Y { w: BinarySeq, k: usize },
    /// Glue vertex `z_{w,i}` shared by a caterpillar and a lexicographic tree.
    Z { w: BinarySeq, pos: usize },
    /// Labelled leaf `x_i`.
    X(usize),
    LexInternal {
        pos: usize,
        h: Option<u8>,
        path: LexPath,
    },
}

impl VertexTag {
    pub fn is_anonymous(&self) -> bool {
        matches!(self, VertexTag::Anonymous)
    }
}

impl fmt::Display for VertexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexTag::Anonymous => Ok(()),
            VertexTag::U(w) => write!(f, "U({w})"),
            VertexTag::V { pos, h } => write!(f, "V({pos},{h})"),
            VertexTag::Y { w, k } => write!(f, "Y({w},{k})"),
            VertexTag::Z { w, pos } => write!(f, "Z({w},{pos})"),
            VertexTag::X(i) => write!(f, "X({i})"),
            VertexTag::LexInternal { pos, h, path } => match h {
                Some(h) => write!(f, "L({pos},{h},{path})"),
                None => write!(f, "L({pos},-,{path})"),
            },
        }
    }
}

impl FromStr for VertexTag {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadTag(s.to_string());
        if s.is_empty() {
            return Ok(VertexTag::Anonymous);
        }
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let kind = &s[..open];
        let args: Vec<&str> = s[open + 1..s.len() - 1].split(',').collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let seq = |t: &str| t.parse::<BinarySeq>().map_err(|_| bad());
        let bit = |t: &str| match t {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            _ => Err(bad()),
        };
        match (kind, args.as_slice()) {
            ("U", [w]) => Ok(VertexTag::U(seq(w)?)),
            ("V", [p, h]) => Ok(VertexTag::V {
                pos: num(p)?,
                h: bit(h)?,
            }),
            ("Y", [w, k]) => Ok(VertexTag::Y {
                w: seq(w)?,
                k: num(k)?,
            }),
            ("Z", [w, p]) => Ok(VertexTag::Z {
                w: seq(w)?,
                pos: num(p)?,
            }),
            ("X", [i]) => Ok(VertexTag::X(num(i)?)),
            ("L", [p, h, path]) => Ok(VertexTag::LexInternal {
                pos: num(p)?,
                h: if *h == "-" { None } else { Some(bit(h)?) },
                path: path.parse()?,
            }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_text_roundtrip() {
        let w: BinarySeq = "0110".parse().unwrap();
        let tags = [
            VertexTag::U(w),
            VertexTag::V { pos: 2, h: 0 },
            VertexTag::Y { w, k: 1 },
            VertexTag::Z { w, pos: 3 },
            VertexTag::X(4),
            VertexTag::LexInternal {
                pos: 2,
                h: Some(1),
                path: "LR".parse().unwrap(),
            },
            VertexTag::LexInternal {
                pos: 1,
                h: None,
                path: LexPath::root(),
            },
        ];
        for t in tags {
            let text = t.to_string();
            assert_eq!(text.parse::<VertexTag>().unwrap(), t, "{text}");
        }
        assert_eq!(VertexTag::V { pos: 2, h: 0 }.to_string(), "V(2,0)");
        assert!("Q(1)".parse::<VertexTag>().is_err());
        assert!("V(1,2)".parse::<VertexTag>().is_err());
        assert!("U(01".parse::<VertexTag>().is_err());
    }

    #[test]
    fn leaf_paths() {
        assert_eq!(LexPath::of_leaf(0, 2).to_string(), "LL");
        assert_eq!(LexPath::of_leaf(2, 2).to_string(), "RL");
        assert_eq!(LexPath::of_leaf(5, 3).prefix(2).to_string(), "RL");
        assert!(LexPath::of_leaf(0, 0).is_root());
    }
}
