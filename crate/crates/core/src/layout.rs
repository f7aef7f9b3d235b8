//! Geometric plan of the pad/pin/hole/channel/ribbon assembly and its
//! design-rule checks.
//!
//! Coordinates are in meters with the origin at the array center. Rows run
//! along x; row `i` sits at `y_i`, and site `(i, j)` has index `i·n + j`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::consts::{MICROMETER, MILLIMETER, NEWTON_PER_MM2, STANDARD_GRAVITY};
use crate::materials::{MaterialCatalog, MaterialError};
use crate::math::floor;
use crate::tlines::PinStack;

/// Relative slack applied to every dimensional comparison.
const REL_TOL: f64 = 1e-9;

pub const HOLE_RANGE: (f64, f64) = (200.0 * MICROMETER, 300.0 * MICROMETER);
pub const PAD_RANGE: (f64, f64) = (100.0 * MICROMETER, 200.0 * MICROMETER);
pub const PAD_THICKNESS_RANGE: (f64, f64) = (5.0 * MICROMETER, 30.0 * MICROMETER);
pub const PIN_LENGTH_RANGE: (f64, f64) = (15.0 * MILLIMETER, 25.0 * MILLIMETER);
/// Smallest manufacturable channel width-to-depth ratio.
pub const MIN_CHANNEL_ASPECT: f64 = 0.14;
pub const MAX_TIP_TOLERANCE: f64 = 2.5 * MICROMETER;
pub const MAX_SOLDER_BALL: f64 = 50.0 * MICROMETER;
pub const GROUND_TRACE_WIDTH: f64 = 50.0 * MICROMETER;

#[derive(Debug, Clone, PartialEq)]
pub enum LayoutError {
    InvalidConfig { field: &'static str, reason: &'static str },
    Material(MaterialError),
}

impl fmt::Display for LayoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidConfig { field, reason } => write!(f, "{field}: {reason}"),
            Self::Material(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for LayoutError {}

impl From<MaterialError> for LayoutError {
    fn from(e: MaterialError) -> Self {
        Self::Material(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationKind {
    Attenuator,
    Filter,
}

/// A component marker placed on a row's ribbon cable. Positional metadata
/// only; electrical values belong to the RF model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub row: u32,
    pub kind: AnnotationKind,
    pub label: String,
    /// Distance along the cable from the array edge, meters.
    pub position: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutConfig {
    pub qubit_pitch: f64,
    pub array_side_count: u32,
    pub pad_diameter: f64,
    pub hole_diameter: f64,
    pub channel_width: f64,
    pub channel_depth: f64,
    pub pin_length: f64,
    pub pad_thickness: f64,
    pub tip_tolerance: f64,
    pub ground_curb_width: f64,
    #[serde(default = "default_ground_trace_width")]
    pub ground_trace_width: f64,
    #[serde(default = "default_solder_ball_diameter")]
    pub solder_ball_diameter: f64,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

fn default_ground_trace_width() -> f64 {
    GROUND_TRACE_WIDTH
}

fn default_solder_ball_diameter() -> f64 {
    40.0 * MICROMETER
}

impl LayoutConfig {
    /// Nominal dimensions for an `n × n` array: 500 µm pitch, 200 µm pads,
    /// 300 µm holes in 300 µm × 1 mm channels, 20 mm pins.
    pub fn nominal(array_side_count: u32) -> Self {
        Self {
            qubit_pitch: 500.0 * MICROMETER,
            array_side_count,
            pad_diameter: 200.0 * MICROMETER,
            hole_diameter: 300.0 * MICROMETER,
            channel_width: 300.0 * MICROMETER,
            channel_depth: 1.0 * MILLIMETER,
            pin_length: 20.0 * MILLIMETER,
            pad_thickness: 10.0 * MICROMETER,
            tip_tolerance: 2.5 * MICROMETER,
            ground_curb_width: 100.0 * MICROMETER,
            ground_trace_width: GROUND_TRACE_WIDTH,
            solder_ball_diameter: default_solder_ball_diameter(),
            annotations: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), LayoutError> {
        let fields = [
            ("qubit_pitch", self.qubit_pitch),
            ("pad_diameter", self.pad_diameter),
            ("hole_diameter", self.hole_diameter),
            ("channel_width", self.channel_width),
            ("channel_depth", self.channel_depth),
            ("pin_length", self.pin_length),
            ("pad_thickness", self.pad_thickness),
            ("tip_tolerance", self.tip_tolerance),
            ("ground_curb_width", self.ground_curb_width),
            ("ground_trace_width", self.ground_trace_width),
            ("solder_ball_diameter", self.solder_ball_diameter),
        ];
        for (field, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(LayoutError::InvalidConfig {
                    field,
                    reason: "must be positive and finite",
                });
            }
        }
        if self.array_side_count == 0 {
            return Err(LayoutError::InvalidConfig {
                field: "array_side_count",
                reason: "must be at least 1",
            });
        }
        for a in &self.annotations {
            if a.row >= self.array_side_count {
                return Err(LayoutError::InvalidConfig {
                    field: "annotations.row",
                    reason: "row outside the array",
                });
            }
            if !(a.position >= 0.0 && a.position.is_finite()) {
                return Err(LayoutError::InvalidConfig {
                    field: "annotations.position",
                    reason: "must be non-negative",
                });
            }
        }
        Ok(())
    }

    /// Side length of the array footprint, `n · pitch`.
    pub fn extent(&self) -> f64 {
        f64::from(self.array_side_count) * self.qubit_pitch
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// A channel along one row of holes, spanning the full array width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRow {
    pub row: u32,
    pub y: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub width: f64,
    pub depth: f64,
}

impl ChannelRow {
    pub fn contains(&self, p: Point) -> bool {
        let slack = REL_TOL * self.width;
        p.x >= self.x_min - slack && p.x <= self.x_max + slack && (p.y - self.y).abs() <= self.width / 2.0 + slack
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonAssignment {
    pub row: u32,
    pub cable: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterposerLayout {
    pub qubit_pitch: f64,
    pub array_side_count: u32,
    pub pad_diameter: f64,
    pub hole_diameter: f64,
    pub pad_centers: Vec<Point>,
    pub hole_centers: Vec<Point>,
    pub channel_rows: Vec<ChannelRow>,
    pub ribbon_assignments: Vec<RibbonAssignment>,
    pub solder_ball_sites: Vec<Point>,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

impl InterposerLayout {
    pub fn site_count(&self) -> usize {
        self.hole_centers.len()
    }

    pub fn extent(&self) -> f64 {
        f64::from(self.array_side_count) * self.qubit_pitch
    }
}

/// Centered grid coordinate of column/row `k` in an `n`-wide array.
pub fn grid_coordinate(k: u32, n: u32, pitch: f64) -> f64 {
    (2.0 * f64::from(k) - f64::from(n - 1)) * (pitch / 2.0)
}

pub fn cable_id(row: u32) -> String {
    format!("ribbon-{row:04}")
}

pub fn generate_layout(cfg: &LayoutConfig) -> Result<InterposerLayout, LayoutError> {
    cfg.validate()?;
    let n = cfg.array_side_count;
    let pitch = cfg.qubit_pitch;
    let half_extent = cfg.extent() / 2.0;
    let sites = (n as usize) * (n as usize);

    let mut holes = Vec::with_capacity(sites);
    for i in 0..n {
        let y = grid_coordinate(i, n, pitch);
        for j in 0..n {
            holes.push(Point::new(grid_coordinate(j, n, pitch), y));
        }
    }

    let channel_rows = (0..n)
        .map(|i| ChannelRow {
            row: i,
            y: grid_coordinate(i, n, pitch),
            x_min: -half_extent,
            x_max: half_extent,
            width: cfg.channel_width,
            depth: cfg.channel_depth,
        })
        .collect();

    let ribbon_assignments = (0..n)
        .map(|row| RibbonAssignment {
            row,
            cable: cable_id(row),
        })
        .collect();

    // Ground traces sit between neighbouring signal lines and at both row
    // ends, so each row has n + 1 ball sites.
    let mut solder_ball_sites = Vec::with_capacity((n as usize) * (n as usize + 1));
    for i in 0..n {
        let y = grid_coordinate(i, n, pitch);
        for k in 0..=n {
            let x = (f64::from(k) - f64::from(n) / 2.0) * pitch;
            solder_ball_sites.push(Point::new(x, y));
        }
    }

    let mut annotations = cfg.annotations.clone();
    annotations.sort_by(|a, b| {
        (a.row, a.kind, &a.label)
            .cmp(&(b.row, b.kind, &b.label))
            .then(a.position.total_cmp(&b.position))
    });

    Ok(InterposerLayout {
        qubit_pitch: pitch,
        array_side_count: n,
        pad_diameter: cfg.pad_diameter,
        hole_diameter: cfg.hole_diameter,
        pad_centers: holes.clone(),
        hole_centers: holes,
        channel_rows,
        ribbon_assignments,
        solder_ball_sites,
        annotations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    /// Hole fits inside the qubit cell.
    R1,
    /// Pin outer diameter equals pad diameter.
    R2,
    /// Hole diameter within the practical range.
    R3,
    /// Channel width/depth aspect ratio.
    R4,
    /// Tip coplanarity.
    R5,
    /// Pin length within the practical range.
    R6,
    /// Solder ball against ground trace width.
    R7,
    /// Channel narrower than the holes it carries.
    R8,
    /// Pin must pass through its hole.
    R9,
    /// Pad thickness within the practical range.
    R10,
    /// Pad diameter within the practical range.
    R11,
    /// Pad/hole bijection and hole-in-channel containment.
    R12,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Error => "error",
            Self::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrcFinding {
    pub rule: RuleId,
    pub severity: Severity,
    pub message: String,
    /// Layout site indices involved, ascending. Empty for global rules.
    pub offending: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DrcReport {
    pub findings: Vec<DrcFinding>,
}

impl DrcReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &DrcFinding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &DrcFinding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn fires(&self, rule: RuleId) -> bool {
        self.findings.iter().any(|f| f.rule == rule)
    }

    /// `(rule, severity, number of offending sites)` per finding, which is
    /// invariant under reordering of layout elements.
    pub fn signature(&self) -> Vec<(RuleId, Severity, usize)> {
        self.findings
            .iter()
            .map(|f| (f.rule, f.severity, f.offending.len()))
            .collect()
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b * (1.0 + REL_TOL)
}

fn within(x: f64, (lo, hi): (f64, f64)) -> bool {
    x >= lo * (1.0 - REL_TOL) && x <= hi * (1.0 + REL_TOL)
}

fn um(x: f64) -> f64 {
    x / MICROMETER
}

/// Width-to-depth ratio of the channels.
pub fn channel_aspect_ratio(cfg: &LayoutConfig) -> f64 {
    cfg.channel_width / cfg.channel_depth
}

/// Indices of holes whose discs overlap another hole.
fn overlapping_holes(centers: &[Point], diameter: f64) -> Vec<usize> {
    let cell = diameter;
    let key = |p: &Point| (floor(p.x / cell) as i64, floor(p.y / cell) as i64);
    let mut grid: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (idx, p) in centers.iter().enumerate() {
        grid.entry(key(p)).or_default().push(idx);
    }
    let limit = diameter * (1.0 - REL_TOL);
    let mut out = Vec::new();
    for (idx, p) in centers.iter().enumerate() {
        let (kx, ky) = key(p);
        let hit = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                grid.get(&(kx + dx, ky + dy)).is_some_and(|bucket| {
                    bucket.iter().any(|&other| {
                        other != idx && {
                            let q = centers[other];
                            libm::hypot(p.x - q.x, p.y - q.y) < limit
                        }
                    })
                })
            })
        });
        if hit {
            out.push(idx);
        }
    }
    out
}

/// Pads and holes pair one-to-one, and every hole sits in a channel.
fn correspondence_findings(layout: &InterposerLayout, cfg: &LayoutConfig) -> Vec<DrcFinding> {
    let mut out = Vec::new();
    let n = cfg.array_side_count as usize;
    if layout.pad_centers.len() != layout.hole_centers.len() || layout.hole_centers.len() != n * n {
        out.push(DrcFinding {
            rule: RuleId::R12,
            severity: Severity::Error,
            message: format!(
                "{} pads and {} holes for a {n}×{n} array",
                layout.pad_centers.len(),
                layout.hole_centers.len()
            ),
            offending: Vec::new(),
        });
        return out;
    }
    let tol = REL_TOL * cfg.qubit_pitch;
    let sorted = |pts: &[Point]| {
        let mut v: Vec<(usize, Point)> = pts.iter().copied().enumerate().collect();
        v.sort_by(|a, b| a.1.y.total_cmp(&b.1.y).then(a.1.x.total_cmp(&b.1.x)));
        v
    };
    let (pads, holes) = (sorted(&layout.pad_centers), sorted(&layout.hole_centers));
    let mut unmatched: Vec<usize> = pads
        .iter()
        .zip(&holes)
        .filter(|((_, p), (_, h))| (p.x - h.x).abs() > tol || (p.y - h.y).abs() > tol)
        .map(|(_, (i, _))| *i)
        .collect();
    unmatched.sort_unstable();
    if !unmatched.is_empty() {
        out.push(DrcFinding {
            rule: RuleId::R12,
            severity: Severity::Error,
            message: format!("{} holes have no coincident pad", unmatched.len()),
            offending: unmatched,
        });
    }
    let outside: Vec<usize> = layout
        .hole_centers
        .iter()
        .enumerate()
        .filter(|(_, h)| !layout.channel_rows.iter().any(|c| c.contains(**h)))
        .map(|(i, _)| i)
        .collect();
    if !outside.is_empty() {
        out.push(DrcFinding {
            rule: RuleId::R12,
            severity: Severity::Error,
            message: format!("{} holes lie outside every channel", outside.len()),
            offending: outside,
        });
    }
    out
}

/// Evaluates every rule. Findings are data; the report is sorted by rule id
/// and then by offending indices.
pub fn run_drc(layout: &InterposerLayout, cfg: &LayoutConfig, pin: &PinStack) -> DrcReport {
    let mut f = Vec::new();
    let mut push = |rule, severity, message: String, offending: Vec<usize>| {
        f.push(DrcFinding {
            rule,
            severity,
            message,
            offending,
        })
    };
    let pin_outer = pin.outer_diameter();

    if !le(cfg.hole_diameter, cfg.qubit_pitch) {
        push(
            RuleId::R1,
            Severity::Error,
            format!(
                "hole diameter {:.1} µm exceeds qubit pitch {:.1} µm",
                um(cfg.hole_diameter),
                um(cfg.qubit_pitch)
            ),
            overlapping_holes(&layout.hole_centers, cfg.hole_diameter),
        );
    }
    if (pin_outer - cfg.pad_diameter).abs() > REL_TOL * cfg.pad_diameter {
        push(
            RuleId::R2,
            Severity::Error,
            format!(
                "pin outer diameter {:.3} µm does not match pad diameter {:.3} µm",
                um(pin_outer),
                um(cfg.pad_diameter)
            ),
            Vec::new(),
        );
    }
    if !within(cfg.hole_diameter, HOLE_RANGE) {
        push(
            RuleId::R3,
            Severity::Warning,
            format!("hole diameter {:.1} µm outside 200–300 µm", um(cfg.hole_diameter)),
            Vec::new(),
        );
    }
    let aspect = channel_aspect_ratio(cfg);
    if aspect < MIN_CHANNEL_ASPECT * (1.0 - REL_TOL) {
        push(
            RuleId::R4,
            Severity::Error,
            format!("channel width/depth {aspect:.3} below the machinable minimum {MIN_CHANNEL_ASPECT}"),
            Vec::new(),
        );
    }
    if !le(cfg.tip_tolerance, MAX_TIP_TOLERANCE) {
        push(
            RuleId::R5,
            Severity::Error,
            format!("tip tolerance {:.2} µm exceeds 2.5 µm", um(cfg.tip_tolerance)),
            Vec::new(),
        );
    }
    if !within(cfg.pin_length, PIN_LENGTH_RANGE) {
        push(
            RuleId::R6,
            Severity::Warning,
            format!("pin length {:.2} mm outside 15–25 mm", cfg.pin_length / MILLIMETER),
            Vec::new(),
        );
    }
    if !le(cfg.solder_ball_diameter, cfg.ground_trace_width) {
        push(
            RuleId::R7,
            Severity::Error,
            format!(
                "solder ball {:.1} µm wider than ground trace {:.1} µm",
                um(cfg.solder_ball_diameter),
                um(cfg.ground_trace_width)
            ),
            Vec::new(),
        );
    } else if !le(cfg.solder_ball_diameter, MAX_SOLDER_BALL) {
        push(
            RuleId::R7,
            Severity::Warning,
            format!("solder ball {:.1} µm above 50 µm", um(cfg.solder_ball_diameter)),
            Vec::new(),
        );
    }
    if cfg.channel_width < cfg.hole_diameter * (1.0 - REL_TOL) {
        push(
            RuleId::R8,
            Severity::Warning,
            format!(
                "channel width {:.1} µm narrower than hole diameter {:.1} µm",
                um(cfg.channel_width),
                um(cfg.hole_diameter)
            ),
            Vec::new(),
        );
    }
    if !(pin_outer < cfg.hole_diameter) {
        push(
            RuleId::R9,
            Severity::Error,
            format!(
                "pin outer diameter {:.1} µm does not fit hole {:.1} µm",
                um(pin_outer),
                um(cfg.hole_diameter)
            ),
            Vec::new(),
        );
    }
    if !within(cfg.pad_thickness, PAD_THICKNESS_RANGE) {
        push(
            RuleId::R10,
            Severity::Warning,
            format!("pad thickness {:.1} µm outside 5–30 µm", um(cfg.pad_thickness)),
            Vec::new(),
        );
    }
    if !within(cfg.pad_diameter, PAD_RANGE) {
        push(
            RuleId::R11,
            Severity::Warning,
            format!("pad diameter {:.1} µm outside 100–200 µm", um(cfg.pad_diameter)),
            Vec::new(),
        );
    }
    f.extend(correspondence_findings(layout, cfg));
    f.sort_by(|a, b| (a.rule, &a.offending, a.severity).cmp(&(b.rule, &b.offending, b.severity)));
    DrcReport { findings: f }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BondingForce {
    pub newtons: f64,
    pub grams_force: f64,
}

/// Force for a contact `pressure` in N/mm² over a disc of `contact_diameter`
/// meters.
pub fn bonding_force(pressure: f64, contact_diameter: f64) -> Result<BondingForce, LayoutError> {
    if !(pressure >= 0.0 && pressure.is_finite()) {
        return Err(LayoutError::InvalidConfig {
            field: "pressure",
            reason: "must be non-negative",
        });
    }
    if !(contact_diameter >= 0.0 && contact_diameter.is_finite()) {
        return Err(LayoutError::InvalidConfig {
            field: "contact_diameter",
            reason: "must be non-negative",
        });
    }
    let r = contact_diameter / 2.0;
    let newtons = pressure * NEWTON_PER_MM2 * PI * r * r;
    Ok(BondingForce {
        newtons,
        grams_force: newtons / STANDARD_GRAVITY * 1000.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BondingMode {
    Conical,
    Spherical,
}

impl fmt::Display for BondingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Conical => "conical",
            Self::Spherical => "spherical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessStep {
    pub number: u32,
    pub title: String,
    pub notes: Vec<String>,
    /// Process temperature, °C.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optional: Option<bool>,
}

pub const COMPRESSION_PRESSURE_RANGE: (f64, f64) = (10.0, 20.0);
pub const ULTRASONIC_FREQUENCY_HZ: f64 = 20e3;
pub const STYCAST_CURE_C: f64 = 60.0;

fn reflow(catalog: &MaterialCatalog, name: &str) -> Result<f64, LayoutError> {
    catalog
        .lookup(name)?
        .melting_or_reflow_temp
        .ok_or(LayoutError::InvalidConfig {
            field: "materials",
            reason: "solder has no reflow temperature",
        })
}

/// Ordered assembly and bonding steps for documentation. Reflow temperatures
/// come from `catalog`.
pub fn process_checklist(
    cfg: &LayoutConfig,
    mode: BondingMode,
    catalog: &MaterialCatalog,
) -> Result<Vec<ProcessStep>, LayoutError> {
    cfg.validate()?;
    let sn_pb = reflow(catalog, "Sn-Pb")?;
    let indium = reflow(catalog, "In")?;
    let pad_um = um(cfg.pad_thickness);

    let mut steps: Vec<(String, Vec<String>, Option<f64>, Option<bool>)> = Vec::new();
    steps.push(match mode {
        BondingMode::Conical => (
            "Prepare pins".into(),
            vec![
                "coat the SUS-304 core with the TiN barrier".into(),
                "no In coating on pin; In or Al outer layers are allowed, Al pierces more reliably".into(),
                "sharpen the tip to a cone".into(),
            ],
            None,
            None,
        ),
        BondingMode::Spherical => (
            "Prepare pins".into(),
            vec![
                "coat the SUS-304 core with TiN, then In".into(),
                "round the tip to a sphere".into(),
            ],
            None,
            None,
        ),
    });
    steps.push((
        "Attach pins to ribbon cables".into(),
        vec![
            "place each pin tail on a signal trace".into(),
            "flip a second cable over the first with about 1 mm offset".into(),
            format!("compress and reflow the Sn-Pb joint at T >= {sn_pb} °C, pin fronts hanging free"),
        ],
        Some(sn_pb),
        None,
    ));
    steps.push((
        "Place ground solder balls".into(),
        vec![format!(
            "press In balls of diameter {:.0} µm onto the {:.0} µm ground traces",
            um(cfg.solder_ball_diameter),
            um(cfg.ground_trace_width)
        )],
        None,
        None,
    ));
    steps.push((
        "Insert assemblies into the interposer".into(),
        vec![
            "fill the holes with STYCAST-1266".into(),
            "protect pins with photoresist and thread each front segment through its hole".into(),
            "center pins with two PTFE spacers".into(),
        ],
        None,
        None,
    ));
    steps.push((
        "Cure the fill".into(),
        vec!["cure STYCAST-1266".into()],
        Some(STYCAST_CURE_C),
        None,
    ));
    steps.push((
        "Solder ground balls to the channel wall".into(),
        vec![format!("heat in a vacuum oven at T >= {indium} °C")],
        Some(indium),
        None,
    ));
    steps.push((
        "Align tips".into(),
        vec![format!(
            "push the pin array onto mesa stops; coplanarity within ±{:.1} µm",
            um(cfg.tip_tolerance)
        )],
        None,
        None,
    ));
    steps.push((
        "Etch oxides".into(),
        match mode {
            BondingMode::Conical => vec![
                "strip the In oxide on the pad with a plasma etch".into(),
                "pin oxide cleaning may be unnecessary".into(),
            ],
            BondingMode::Spherical => vec![
                "etch the In oxide on the pin with hydrochloric acid".into(),
                "etch the In oxide on the pad with a plasma etch".into(),
            ],
        },
        None,
        None,
    ));
    steps.push(match mode {
        BondingMode::Conical => (
            "Bond pins to pads (conical)".into(),
            vec![format!(
                "tip penetrates about 1 µm or less of the {pad_um:.0} µm In pad at flip-chip pressure"
            )],
            None,
            None,
        ),
        BondingMode::Spherical => {
            let (lo, hi) = COMPRESSION_PRESSURE_RANGE;
            let f_lo = bonding_force(lo, cfg.pad_diameter)?;
            let f_hi = bonding_force(hi, cfg.pad_diameter)?;
            (
                "Bond pins to pads (spherical compression)".into(),
                vec![format!(
                    "compress at {lo}–{hi} N/mm² over the {:.0} µm pad: {:.3}–{:.3} N ({:.0}–{:.0} gf) per pin",
                    um(cfg.pad_diameter),
                    f_lo.newtons,
                    f_hi.newtons,
                    f_lo.grams_force,
                    f_hi.grams_force
                )],
                None,
                None,
            )
        }
    });
    steps.push((
        "Ultrasonic assist".into(),
        vec![format!(
            "apply a {:.0} kHz ultrasonic signal to ease the pin-pad connection",
            ULTRASONIC_FREQUENCY_HZ / 1e3
        )],
        None,
        Some(true),
    ));
    steps.push((
        "Bond grounds".into(),
        vec![
            "coat the interposer bottom with about 10 µm of In".into(),
            format!(
                "bump-bond it to the {:.0} µm In curb on the chip ground planes",
                um(cfg.ground_curb_width)
            ),
        ],
        None,
        None,
    ));

    Ok(steps
        .into_iter()
        .zip(1u32..)
        .map(|((title, notes, temperature_c, optional), number)| ProcessStep {
            number,
            title,
            notes,
            temperature_c,
            optional,
        })
        .collect())
}

impl ProcessStep {
    pub fn mentions(&self, needle: &str) -> bool {
        self.title.contains(needle) || self.notes.iter().any(|n| n.contains(needle))
    }
}

impl fmt::Display for ProcessStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {}", self.number, self.title)?;
        if self.optional == Some(true) {
            f.write_str(" (optional)")?;
        }
        for n in &self.notes {
            write!(f, "\n   - {n}")?;
        }
        Ok(())
    }
}

/// Nominal pin: 178 µm SUS-304 core, 1 µm TiN, 10 µm In.
pub fn nominal_pin() -> PinStack {
    use crate::tlines::Coating;
    PinStack {
        core_diameter: 178.0 * MICROMETER,
        coatings: vec![
            Coating {
                material: "TiN".to_string(),
                thickness: 1.0 * MICROMETER,
            },
            Coating {
                material: "In".to_string(),
                thickness: 10.0 * MICROMETER,
            },
        ],
    }
}
