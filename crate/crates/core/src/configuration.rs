//! Finite point configurations and their labelled counterparts.
//!
//! A [`Configuration`] is a finite window onto an unlabelled (conceptually
//! infinite) particle configuration. It optionally remembers the radius of the
//! window it was cut from, so that drift truncations can refuse to look beyond
//! the data they were given. A [`LabeledState`] is an ordered coordinate
//! sequence; [`label`](Configuration::label) and
//! [`unlabel`](LabeledState::unlabel) move between the two.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two points closer than this are considered to collide.
pub const COLLISION_TOL: f64 = 1e-12;

/// Spatial dimension of a point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn n(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    pub fn from_n(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            _ => Err(Error::invalid("dimension", format!("{n} is not 1 or 2"))),
        }
    }
}

/// A point of ℝ or ℝ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 2],
    dim: Dim,
}

impl Point {
    pub fn d1(x: f64) -> Self {
        Point { coords: [x, 0.0], dim: Dim::One }
    }

    pub fn d2(x: f64, y: f64) -> Self {
        Point { coords: [x, y], dim: Dim::Two }
    }

    fn from_slice(c: &[f64]) -> Self {
        match c.len() {
            1 => Point::d1(c[0]),
            _ => Point::d2(c[0], c[1]),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim.n()]
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn norm(&self) -> f64 {
        match self.dim {
            Dim::One => self.coords[0].abs(),
            Dim::Two => self.coords[0].hypot(self.coords[1]),
        }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(self.coords(), other.coords())
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    match a.len() {
        1 => (a[0] - b[0]).abs(),
        _ => (a[0] - b[0]).hypot(a[1] - b[1]),
    }
}

fn norm(c: &[f64]) -> f64 {
    match c.len() {
        1 => c[0].abs(),
        _ => c[0].hypot(c[1]),
    }
}

/// Radial order with lexicographic tie-break.
fn radial_cmp(a: &[f64], b: &[f64]) -> Ordering {
    norm(a)
        .total_cmp(&norm(b))
        .then_with(|| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal))
}

fn check_finite(coords: &[f64], d: usize) -> Result<()> {
    match coords.iter().position(|c| !c.is_finite()) {
        Some(k) => Err(Error::NonFinite { index: k / d }),
        None => Ok(()),
    }
}

/// A finite, unordered collection of points, optionally tagged with the radius of
/// the window it represents.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    dim: Dim,
    coords: Vec<f64>,
    window: Option<f64>,
}

impl Configuration {
    pub fn empty(dim: Dim) -> Self {
        Configuration { dim, coords: Vec::new(), window: None }
    }

    pub fn from_points(dim: Dim, points: &[Point]) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim.n());
        for p in points {
            if p.dim != dim {
                return Err(Error::DimensionMismatch { expected: dim.n(), got: p.dim.n() });
            }
            coords.extend_from_slice(p.coords());
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_1d(xs: Vec<f64>) -> Result<Self> {
        Self::from_flat(Dim::One, xs)
    }

    pub fn from_2d(xy: &[(f64, f64)]) -> Result<Self> {
        Self::from_flat(Dim::Two, xy.iter().flat_map(|&(x, y)| [x, y]).collect())
    }

    /// Builds a configuration from interleaved coordinates (`x0, y0, x1, y1, …` in 2D).
    pub fn from_flat(dim: Dim, coords: Vec<f64>) -> Result<Self> {
        if !coords.len().is_multiple_of(dim.n()) {
            return Err(Error::DimensionMismatch { expected: dim.n(), got: coords.len() % dim.n() });
        }
        check_finite(&coords, dim.n())?;
        Ok(Configuration { dim, coords, window: None })
    }

    /// Records that this configuration is complete inside the ball of radius `r`.
    pub fn with_window(mut self, r: f64) -> Self {
        self.window = Some(r);
        self
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.n()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Radius within which the configuration is known to be complete; `None` means
    /// the configuration is the whole (finite) system.
    pub fn window(&self) -> Option<f64> {
        self.window
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> Point {
        let d = self.dim.n();
        Point::from_slice(&self.coords[i * d..(i + 1) * d])
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.coords.chunks_exact(self.dim.n()).map(Point::from_slice)
    }

    /// First colliding pair, if any.
    pub fn first_collision(&self) -> Option<(usize, usize, f64)> {
        first_collision(self.dim, &self.coords)
    }

    /// Whether no two points lie within [`COLLISION_TOL`] of each other.
    pub fn is_simple(&self) -> bool {
        self.first_collision().is_none()
    }

    fn filter(&self, keep: impl Fn(f64) -> bool) -> Configuration {
        let coords = self
            .coords
            .chunks_exact(self.dim.n())
            .filter(|c| keep(norm(c)))
            .flatten()
            .copied()
            .collect();
        Configuration { dim: self.dim, coords, window: None }
    }

    /// Points with `|x| < r`.
    pub fn restrict(&self, r: f64) -> Configuration {
        let mut inner = self.filter(|n| n < r);
        inner.window = Some(self.window.map_or(r, |w| w.min(r)));
        inner
    }

    /// Points with `|x| >= r`.
    pub fn restrict_complement(&self, r: f64) -> Configuration {
        let mut outer = self.filter(|n| n >= r);
        outer.window = self.window;
        outer
    }

    pub fn partition(&self, r: f64) -> (Configuration, Configuration) {
        (self.restrict(r), self.restrict_complement(r))
    }

    /// Union of two configurations of the same dimension (as multisets).
    pub fn union(&self, other: &Configuration) -> Result<Configuration> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim.n(), got: other.dim.n() });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(Configuration { dim: self.dim, coords, window: None })
    }

    /// Canonical labelling of a simple configuration.
    pub fn label(&self, mode: LabelMode) -> Result<LabeledState> {
        if let Some((i, j, distance)) = self.first_collision() {
            return Err(Error::Collision { i, j, distance });
        }
        let d = self.dim.n();
        let mut pts: Vec<&[f64]> = self.coords.chunks_exact(d).collect();
        match mode {
            LabelMode::Increasing => {
                if self.dim != Dim::One {
                    return Err(Error::invalid("mode", "increasing labelling requires 1D points"));
                }
                pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
            }
            LabelMode::Radial => pts.sort_by(|a, b| radial_cmp(a, b)),
            LabelMode::Tracked => {}
        }
        Ok(LabeledState {
            dim: self.dim,
            coords: pts.concat(),
            mode,
            window: self.window,
        })
    }

    /// Multiset equality up to exact coordinate values.
    pub fn same_points(&self, other: &Configuration) -> bool {
        if self.dim != other.dim || self.len() != other.len() {
            return false;
        }
        let sorted = |c: &Configuration| {
            let mut v: Vec<&[f64]> = c.coords.chunks_exact(c.dim.n()).collect();
            v.sort_by(|a, b| radial_cmp(a, b));
            v.concat()
        };
        sorted(self) == sorted(other)
    }

    pub fn to_csv(&self) -> String {
        points_to_csv(self.dim, &self.coords)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let (dim, coords) = points_from_csv(text)?;
        Self::from_flat(dim, coords)
    }

    pub fn to_json(&self) -> String {
        points_to_json(self.dim, &self.coords)
    }

    /// Parses a JSON array of numbers (1D) or of pairs (2D). The empty array
    /// carries no dimension and decodes as 1D; use CSV when that matters.
    pub fn from_json(text: &str) -> Result<Self> {
        let (dim, coords) = points_from_json(text)?;
        Self::from_flat(dim, coords)
    }
}

pub(crate) fn first_collision(dim: Dim, coords: &[f64]) -> Option<(usize, usize, f64)> {
    let d = dim.n();
    let n = coords.len() / d;
    if d == 1 {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| coords[a].total_cmp(&coords[b]));
        return idx.windows(2).find_map(|w| {
            let g = (coords[w[1]] - coords[w[0]]).abs();
            (g < COLLISION_TOL).then(|| (w[0].min(w[1]), w[0].max(w[1]), g))
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let g = dist(&coords[i * d..(i + 1) * d], &coords[j * d..(j + 1) * d]);
            if g < COLLISION_TOL {
                return Some((i, j, g));
            }
        }
    }
    None
}

/// How the coordinates of a [`LabeledState`] are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelMode {
    /// Strictly increasing 1D coordinates (Weyl chamber).
    Increasing,
    /// Nondecreasing `|x|`, lexicographic tie-break.
    Radial,
    /// Labels carried along a trajectory; no ordering is imposed.
    Tracked,
}

/// An ordered finite sequence of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledState {
    dim: Dim,
    coords: Vec<f64>,
    mode: LabelMode,
    window: Option<f64>,
}

impl LabeledState {
    /// A strictly increasing 1D state.
    pub fn increasing(xs: Vec<f64>) -> Result<Self> {
        check_finite(&xs, 1)?;
        if let Some(k) = xs.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NotOrdered { index: k + 1 });
        }
        Ok(LabeledState { dim: Dim::One, coords: xs, mode: LabelMode::Increasing, window: None })
    }

    /// Coordinates in the given order, without any ordering requirement.
    pub fn tracked(dim: Dim, coords: Vec<f64>) -> Result<Self> {
        if !coords.len().is_multiple_of(dim.n()) {
            return Err(Error::DimensionMismatch { expected: dim.n(), got: coords.len() % dim.n() });
        }
        check_finite(&coords, dim.n())?;
        Ok(LabeledState { dim, coords, mode: LabelMode::Tracked, window: None })
    }

    pub fn with_window(mut self, r: f64) -> Self {
        self.window = Some(r);
        self
    }

    pub(crate) fn from_parts(dim: Dim, coords: Vec<f64>, mode: LabelMode, window: Option<f64>) -> Self {
        LabeledState { dim, coords, mode, window }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn mode(&self) -> LabelMode {
        self.mode
    }

    pub fn window(&self) -> Option<f64> {
        self.window
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.n()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Flat coordinates; in 1D this is the position vector itself.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn point(&self, i: usize) -> Point {
        let d = self.dim.n();
        Point::from_slice(&self.coords[i * d..(i + 1) * d])
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.coords.chunks_exact(self.dim.n()).map(Point::from_slice)
    }

    /// Forgets the order.
    pub fn unlabel(&self) -> Configuration {
        Configuration { dim: self.dim, coords: self.coords.clone(), window: self.window }
    }

    /// Smallest distance between two points (1D: between consecutive points).
    pub fn min_gap(&self) -> f64 {
        min_gap(self.dim, &self.coords)
    }

    pub fn to_csv(&self) -> String {
        points_to_csv(self.dim, &self.coords)
    }
}

pub(crate) fn min_gap(dim: Dim, coords: &[f64]) -> f64 {
    let d = dim.n();
    let n = coords.len() / d;
    let mut best = f64::INFINITY;
    if d == 1 {
        let mut s = coords.to_vec();
        s.sort_by(f64::total_cmp);
        for w in s.windows(2) {
            best = best.min(w[1] - w[0]);
        }
        return best;
    }
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(dist(&coords[i * d..(i + 1) * d], &coords[j * d..(j + 1) * d]));
        }
    }
    best
}

/// Formats a float with 17 significant digits (bit-exact round trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn points_to_csv(dim: Dim, coords: &[f64]) -> String {
    let mut out = String::from(if dim == Dim::One { "x\n" } else { "x,y\n" });
    for c in coords.chunks_exact(dim.n()) {
        let row: Vec<String> = c.iter().map(|&v| fmt_f64(v)).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

fn points_from_csv(text: &str) -> Result<(Dim, Vec<f64>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, reason: "missing header".into() })?;
    let dim = match header.trim() {
        "x" => Dim::One,
        "x,y" => Dim::Two,
        other => return Err(Error::Parse { line: 1, reason: format!("unexpected header `{other}`") }),
    };
    let mut coords = Vec::new();
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != dim.n() {
            return Err(Error::Parse { line: ln + 1, reason: format!("expected {} columns", dim.n()) });
        }
        for f in fields {
            coords.push(f.parse::<f64>().map_err(|e| Error::Parse { line: ln + 1, reason: e.to_string() })?);
        }
    }
    Ok((dim, coords))
}

fn points_to_json(dim: Dim, coords: &[f64]) -> String {
    let value = match dim {
        Dim::One => serde_json::to_value(coords),
        Dim::Two => serde_json::to_value(coords.chunks_exact(2).map(|c| [c[0], c[1]]).collect::<Vec<_>>()),
    };
    value.expect("finite floats serialize").to_string()
}

fn points_from_json(text: &str) -> Result<(Dim, Vec<f64>)> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Points {
        One(Vec<f64>),
        Two(Vec<[f64; 2]>),
    }
    Ok(match serde_json::from_str::<Points>(text)? {
        Points::One(v) => (Dim::One, v),
        Points::Two(v) => (Dim::Two, v.into_iter().flatten().collect()),
    })
}
