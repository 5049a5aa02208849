use serde::{Deserialize, Serialize};

use crate::constructions::omega_vertex_count;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// 7 colours, `G = Ω_5 K_8`, 32-vertex `H`.
    C7,
    /// 5 colours, `G = Ω_7 K_6`, 30-vertex `H`.
    C5Refined,
    /// 5 colours, `G = Ω_13 K_6`, full `h^{(d)}` chain for every `q`.
    C5Wide,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::C7, Variant::C5Refined, Variant::C5Wide];

    pub fn name(self) -> &'static str {
        match self {
            Variant::C7 => "c7",
            Variant::C5Refined => "c5_refined",
            Variant::C5Wide => "c5_wide",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        Variant::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Named inequality sets on `(k, c, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalitySet {
    /// `c >= n + k + 1`, `c >= 3k + 2`.
    ThreeKPlusTwo,
    /// The above plus `n + 2k - 3 >= c`.
    ThreeKPlusTwoBounded,
    /// `c >= n + k + 1`, `n >= k + 1`, `c + 1 <= n k`.
    Wide,
    /// `c >= n + 1`, `c >= 2k + 1`, `c >= 5`, `c + 1 <= n k`.
    Refined,
}

pub fn parameter_check(k: usize, c: usize, n: usize, set: InequalitySet) -> bool {
    let (k, c, n) = (k as i64, c as i64, n as i64);
    match set {
        InequalitySet::ThreeKPlusTwo => c > n + k && c >= 3 * k + 2,
        InequalitySet::ThreeKPlusTwoBounded => c > n + k && c >= 3 * k + 2 && n + 2 * k - 3 >= c,
        InequalitySet::Wide => c > n + k && n > k && c < n * k,
        InequalitySet::Refined => c > n && c > 2 * k && c >= 5 && c < n * k,
    }
}

/// Parameters of one counterexample pipeline. `G` is the tuple construction
/// on `c + 1` colours with half-width `d_g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub variant: Variant,
    pub k: usize,
    pub c: usize,
    pub n: usize,
    pub d_g: usize,
}

impl CounterexampleParams {
    pub fn for_variant(variant: Variant) -> Self {
        let (k, c, n, d_g) = match variant {
            Variant::C7 => (2, 7, 4, 2),
            Variant::C5Refined => (2, 5, 3, 3),
            Variant::C5Wide => (2, 5, 3, 6),
        };
        CounterexampleParams { variant, k, c, n, d_g }
    }

    pub fn inequalities(&self) -> InequalitySet {
        match self.variant {
            Variant::C7 => InequalitySet::Wide,
            Variant::C5Refined | Variant::C5Wide => InequalitySet::Refined,
        }
    }

    /// Colour count of the complete graph `G` is built over.
    pub fn omega_colors(&self) -> usize {
        self.c + 1
    }

    pub fn validate(&self) -> Result<()> {
        if *self != Self::for_variant(self.variant) {
            return Err(Error::InvalidParameter(format!(
                "variant {} requires (k,c,n,d_g) = {:?}, got {:?}",
                self.variant,
                Self::for_variant(self.variant).tuple(),
                self.tuple()
            )));
        }
        if !parameter_check(self.k, self.c, self.n, self.inequalities()) {
            return Err(Error::InvalidParameter(format!(
                "(k,c,n) = ({},{},{}) violates {:?}",
                self.k,
                self.c,
                self.n,
                self.inequalities()
            )));
        }
        Ok(())
    }

    fn tuple(&self) -> (usize, usize, usize, usize) {
        (self.k, self.c, self.n, self.d_g)
    }

    /// Known sizes for this variant; `None` where no value is fixed in advance.
    pub fn expected(&self) -> ExpectedCounts {
        let g_vertices = omega_vertex_count(self.omega_colors(), self.d_g);
        let (c, n) = (self.c, self.n);
        match self.variant {
            Variant::C7 => ExpectedCounts {
                g_vertices,
                g_edges: None,
                h_vertices: Some(c + 1 + n * (c - n) * 2),
                h_edges: None,
            },
            Variant::C5Refined => ExpectedCounts {
                g_vertices,
                g_edges: Some(36015),
                h_vertices: Some(c + 1 + n * (2 + 3 + 3)),
                h_edges: Some(108),
            },
            Variant::C5Wide => ExpectedCounts {
                g_vertices,
                g_edges: None,
                h_vertices: None,
                h_edges: None,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub g_vertices: usize,
    pub g_edges: Option<usize>,
    pub h_vertices: Option<usize>,
    pub h_edges: Option<usize>,
}
