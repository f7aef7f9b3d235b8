//! Golden-value table for `paper-check`: every published worked number the
//! library should reproduce, each with its tolerance, plus seeded randomized
//! consistency checks.

use pinchip_core::layout::{
    bonding_force, generate_layout, nominal_pin, process_checklist, run_drc, BondingMode, LayoutConfig,
};
use pinchip_core::materials::MaterialCatalog;
use pinchip_core::rfnet::{cascade, to_s_parameters, uniform_grid, ElementKind, NetworkElement};
use pinchip_core::scaling::{
    check_pitch_condition, lateral_crossover_length, lateral_scaling_report, logical_qubit_estimate,
    required_pitch_for_full_chip, vertical_scaling_report, wire_pitch_from_bonds, BondWireGeometry, QubitArraySpec,
    WiringArchitecture,
};
use pinchip_core::thermal::{controller_budget, ControllerTech, Stage};
use pinchip_core::tlines::{coax_impedance, coax_outer_for_impedance, Coating, CoaxSpec, PinStack};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::table::Table;

const UM: f64 = 1e-6;
const MM: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenRow {
    pub id: String,
    pub description: String,
    pub computed: String,
    pub expected: String,
    pub tolerance: String,
    pub pass: bool,
}

struct Rows(Vec<GoldenRow>);

impl Rows {
    fn push(&mut self, id: &str, description: &str, computed: String, expected: String, tolerance: &str, pass: bool) {
        self.0.push(GoldenRow {
            id: id.into(),
            description: description.into(),
            computed,
            expected,
            tolerance: tolerance.into(),
            pass,
        });
    }

    fn abs(&mut self, id: &str, description: &str, computed: f64, expected: f64, tol: f64, unit: &str) {
        let pass = (computed - expected).abs() <= tol;
        self.push(
            id,
            description,
            format!("{computed:.6} {unit}"),
            format!("{expected} {unit}"),
            &format!("±{tol} {unit}"),
            pass,
        );
    }

    fn rel(&mut self, id: &str, description: &str, computed: f64, expected: f64, tol: f64, unit: &str) {
        let pass = ((computed - expected) / expected).abs() <= tol;
        self.push(
            id,
            description,
            format!("{computed:.6} {unit}"),
            format!("{expected} {unit}"),
            &if tol < 1e-6 {
                format!("{tol:e} relative")
            } else {
                format!("±{}%", tol * 100.0)
            },
            pass,
        );
    }

    fn exact<T: PartialEq + std::fmt::Display>(&mut self, id: &str, description: &str, computed: T, expected: T) {
        let pass = computed == expected;
        self.push(
            id,
            description,
            computed.to_string(),
            expected.to_string(),
            "exact",
            pass,
        );
    }
}

fn pin(core: f64) -> PinStack {
    PinStack {
        core_diameter: core,
        coatings: vec![
            Coating {
                material: "TiN".into(),
                thickness: 1.0 * UM,
            },
            Coating {
                material: "In".into(),
                thickness: 10.0 * UM,
            },
        ],
    }
}

fn analysis<T, E: std::fmt::Display>(ctx: &str, r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| CliError::analysis(ctx, e))
}

/// Deterministic rows reproducing published values.
pub fn golden_rows(catalog: &MaterialCatalog) -> Result<Vec<GoldenRow>> {
    let mut rows = Rows(Vec::new());

    let stycast = analysis(
        "materials",
        catalog.lookup("STYCAST-1266").and_then(|m| m.permittivity()),
    )?;
    rows.abs("M1", "STYCAST-1266 relative permittivity", stycast, 3.0, 1e-12, "");
    let nb = analysis("materials", catalog.lookup("Nb"))?;
    rows.abs(
        "M2",
        "Nb superconducting Tc",
        nb.superconducting_tc.unwrap_or(f64::NAN),
        9.2,
        1e-12,
        "K",
    );
    rows.exact(
        "M3",
        "Nb superconducting at 10 mK",
        analysis("materials", nb.is_superconducting(0.01))?,
        true,
    );

    let z = |d: f64, big_d: f64| {
        analysis(
            "tlines",
            coax_impedance(&CoaxSpec {
                inner_diameter: d,
                outer_diameter: big_d,
                relative_permittivity: stycast,
            }),
        )
    };
    rows.abs(
        "1a",
        "coax Z, d=100 um, D=200 um, eps_r=3",
        z(100.0 * UM, 200.0 * UM)?,
        24.0,
        0.5,
        "ohm",
    );
    rows.abs(
        "1b",
        "coax Z, d=200 um, D=300 um, eps_r=3",
        z(200.0 * UM, 300.0 * UM)?,
        14.0,
        0.5,
        "ohm",
    );

    let outer = |zc: f64| analysis("tlines", coax_outer_for_impedance(100.0 * UM, zc, stycast));
    rows.rel(
        "2a",
        "coax footprint for 50 ohm, d=100 um",
        outer(50.0)? / MM,
        0.40,
        0.05,
        "mm",
    );
    rows.rel(
        "2b",
        "coax footprint for 25 ohm, d=100 um",
        outer(25.0)? / MM,
        0.20,
        0.05,
        "mm",
    );

    let small = pin(78.0 * UM).outer_diameter();
    let large = pin(178.0 * UM).outer_diameter();
    rows.rel("3a", "pin stack 78 um + TiN + In", small / UM, 100.0, 1e-12, "um");
    rows.rel("3b", "pin stack 178 um + TiN + In", large / UM, 200.0, 1e-12, "um");

    let bonds = BondWireGeometry {
        wire_diameter: 18.0 * UM,
        wire_gap: 10.0 * UM,
        wires_per_line: 3,
        grounds_shared: true,
    };
    let p_w = wire_pitch_from_bonds(&bonds);
    rows.rel(
        "4",
        "wire-bond pitch, 18 um wires, 10 um gap, 3 wires, shared grounds",
        p_w / UM,
        56.0,
        1e-12,
        "um",
    );

    rows.exact(
        "4b",
        "pitch condition 56 um wires / 500 um qubits",
        check_pitch_condition(56.0 * UM, 500.0 * UM),
        true,
    );
    rows.exact(
        "4c",
        "pitch condition 1 mm coax / 500 um qubits",
        check_pitch_condition(1.0 * MM, 500.0 * UM),
        false,
    );

    let crossover = lateral_crossover_length(500.0 * UM, 56.0 * UM);
    rows.abs(
        "5a",
        "lateral crossover length, 500 um / 56 um",
        crossover / MM,
        17.86,
        0.01,
        "mm",
    );
    let flip = WiringArchitecture::lateral(56.0 * UM);
    let at = |side: f64| {
        analysis(
            "scaling",
            lateral_scaling_report(
                &QubitArraySpec {
                    qubit_pitch: 500.0 * UM,
                    chip_side: side,
                },
                &flip,
            ),
        )
    };
    let n_exact = at(crossover)?.qubits;
    rows.push(
        "5b",
        "lateral N_q at the crossover",
        n_exact.to_string(),
        "[1225, 1296]".into(),
        "range",
        (1225..=1296).contains(&n_exact),
    );
    rows.exact("5c", "lateral N_q at 18 mm", at(18.0 * MM)?.qubits, 1296);

    let vertical = analysis(
        "scaling",
        vertical_scaling_report(
            &QubitArraySpec {
                qubit_pitch: 500.0 * UM,
                chip_side: 200.0 * MM,
            },
            &WiringArchitecture::vertical(400.0 * UM),
        ),
    )?;
    rows.exact("6", "vertical N_q, 200 mm chip, 500 um pitch", vertical.qubits, 160_000);
    rows.exact("7", "lateral N_w at 200 mm, 56 um pitch", at(200.0 * MM)?.wires, 14_286);
    rows.rel(
        "8",
        "qubit pitch to wire a full 200 mm chip laterally",
        required_pitch_for_full_chip(200.0 * MM, 56.0 * UM) / MM,
        1.67,
        0.02,
        "mm",
    );
    let ibm = analysis(
        "scaling",
        vertical_scaling_report(
            &QubitArraySpec {
                qubit_pitch: 3.5 * MM,
                chip_side: 200.0 * MM,
            },
            &WiringArchitecture::vertical(400.0 * UM),
        ),
    )?;
    rows.exact("9a", "N_q at 3.5 mm spacing on 200 mm", ibm.qubits, 3265);
    rows.rel(
        "9b",
        "N_q at 3.5 mm spacing vs rounded 3270",
        ibm.qubits as f64,
        3270.0,
        0.002,
        "",
    );
    rows.exact(
        "10",
        "logical qubits, 160000 physical at 2000 per logical",
        analysis("scaling", logical_qubit_estimate(vertical.qubits, 2000))?,
        80,
    );

    let three_k = Stage::new("3K", 3.0, 1.0);
    let budget = |tech: ControllerTech| analysis("thermal", controller_budget(100_000, &tech, &three_k));
    let sfq = budget(ControllerTech::sfq())?;
    rows.rel("11a", "1e5 SFQ controllers at 100 nW", sfq.total, 0.01, 1e-12, "W");
    rows.exact("11b", "SFQ budget feasible at 1 W", sfq.feasible, true);
    rows.rel("11c", "SFQ margin", sfq.margin, 100.0, 1e-12, "");
    let cmos = budget(ControllerTech::cryo_cmos())?;
    rows.rel("11d", "1e5 cryo-CMOS controllers at 10 uW", cmos.total, 1.0, 1e-12, "W");
    rows.rel("11e", "cryo-CMOS margin", cmos.margin, 1.0, 1e-12, "");
    let target = budget(ControllerTech::target())?;
    rows.rel(
        "11f",
        "1e5 target controllers at 1 nW",
        target.total,
        100e-6,
        1e-12,
        "W",
    );
    rows.exact("11g", "target budget feasible", target.feasible, true);

    let f = 5e9;
    let quarter = NetworkElement::line("pin", 24.0, 3.0, 299_792_458.0 / (f * 3f64.sqrt()) / 4.0);
    let s11 = analysis("rfnet", cascade(&[quarter], &[f]).and_then(|n| to_s_parameters(&n)))?.s[0]
        .s11
        .norm();
    rows.abs(
        "15",
        "quarter-wave 24 ohm line between 50 ohm ports, |S11|",
        s11,
        0.626,
        1e-3,
        "",
    );

    let big = LayoutConfig::nominal(400);
    let big_layout = analysis("layout", generate_layout(&big))?;
    rows.exact("L1", "sites in a 400x400 array", big_layout.site_count(), 160_000);
    rows.rel(
        "L2",
        "array extent at 500 um pitch",
        big_layout.extent() / MM,
        200.0,
        1e-12,
        "mm",
    );
    let nominal = LayoutConfig::nominal(8);
    let drc = run_drc(
        &analysis("layout", generate_layout(&nominal))?,
        &nominal,
        &nominal_pin(),
    );
    rows.exact("L3", "nominal layout DRC findings", drc.findings.len(), 0);
    let conical = analysis("layout", process_checklist(&nominal, BondingMode::Conical, catalog))?;
    let spherical = analysis("layout", process_checklist(&nominal, BondingMode::Spherical, catalog))?;
    rows.exact(
        "L4",
        "conical checklist notes uncoated pin",
        conical.iter().any(|s| s.mentions("no In coating on pin")),
        true,
    );
    rows.exact(
        "L5",
        "spherical checklist cites 10-20 N/mm2",
        spherical.iter().any(|s| s.mentions("10–20 N/mm²")),
        true,
    );
    let reflow = |steps: &[pinchip_core::layout::ProcessStep]| {
        steps
            .iter()
            .any(|s| s.temperature_c == Some(183.0) && s.mentions("Sn-Pb"))
    };
    rows.exact(
        "L6",
        "Sn-Pb reflow at 183 C in both checklists",
        reflow(&conical) && reflow(&spherical),
        true,
    );
    let force = analysis("layout", bonding_force(10.0, 200.0 * UM))?;
    rows.abs(
        "L7",
        "bonding force, 10 N/mm2 over 200 um",
        force.newtons,
        0.314,
        1e-3,
        "N",
    );

    // Linked sweep: pin 100 -> 200 um inside hole 200 -> 300 um.
    let zs: Vec<f64> = (0..11)
        .map(|i| {
            let t = i as f64 / 10.0;
            z((100.0 + 100.0 * t) * UM, (200.0 + 100.0 * t) * UM)
        })
        .collect::<Result<_>>()?;
    let monotone = zs.windows(2).all(|w| w[1] < w[0]);
    rows.push(
        "S1",
        "coax Z over 11 linked pin/hole points",
        format!("{:.3} -> {:.3} ohm, monotone={monotone}", zs[0], zs[10]),
        "24 -> 14 ohm, descending".into(),
        "±0.5 ohm",
        monotone && (zs[0] - 24.0).abs() <= 0.5 && (zs[10] - 14.0).abs() <= 0.5,
    );

    Ok(rows.0)
}

/// Seeded randomized consistency checks; `samples` draws per check.
pub fn property_rows(seed: u64, samples: usize) -> Result<Vec<GoldenRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Rows(Vec::new());

    let mut worst = 0.0f64;
    for _ in 0..samples {
        let p_q = rng.gen_range(50.0 * UM..5.0 * MM);
        let p_w = rng.gen_range(10.0 * UM..p_q);
        let side = lateral_crossover_length(p_q, p_w);
        let r = analysis(
            "scaling",
            lateral_scaling_report(
                &QubitArraySpec {
                    qubit_pitch: p_q,
                    chip_side: side,
                },
                &WiringArchitecture::lateral(p_w),
            ),
        )?;
        worst = worst.max(((r.qubits_exact - r.wires_exact) / r.wires_exact).abs());
    }
    rows.push(
        "P12",
        &format!("qubit/wire counts agree at the crossover ({samples} draws)"),
        format!("{worst:.3e}"),
        "0".into(),
        "< 1e-12 relative",
        worst < 1e-12,
    );

    let mut worst = 0.0f64;
    for _ in 0..samples {
        let d = rng.gen_range(10.0 * UM..1.0 * MM);
        let spec = CoaxSpec {
            inner_diameter: d,
            outer_diameter: d * rng.gen_range(1.01..20.0),
            relative_permittivity: rng.gen_range(1.0..12.0),
        };
        let zc = analysis("tlines", coax_impedance(&spec))?;
        let back = analysis("tlines", coax_outer_for_impedance(d, zc, spec.relative_permittivity))?;
        worst = worst.max(((back - spec.outer_diameter) / spec.outer_diameter).abs());
    }
    rows.push(
        "P13",
        &format!("coax impedance round trip ({samples} draws)"),
        format!("{worst:.3e}"),
        "0".into(),
        "< 1e-10 relative",
        worst < 1e-10,
    );

    let cascades = samples.min(100);
    let grid = analysis("rfnet", uniform_grid(0.0, 10e9, 101))?;
    let (mut energy, mut det) = (0.0f64, 0.0f64);
    for _ in 0..cascades {
        let elements = random_lossless_cascade(&mut rng);
        let z1 = rng.gen_range(10.0..100.0);
        let z2 = rng.gen_range(10.0..100.0);
        let net = analysis("rfnet", cascade(&elements, &grid))?.with_ports(z1, z2);
        for m in &net.abcd {
            det = det.max((m.determinant() - 1.0).norm());
        }
        for s in analysis("rfnet", to_s_parameters(&net))?.s {
            energy = energy.max((s.s11.norm_sqr() + s.s21.norm_sqr() - 1.0).abs());
        }
    }
    rows.push(
        "P14",
        &format!("lossless cascades conserve energy ({cascades} x 101 points)"),
        format!("{energy:.3e}"),
        "0".into(),
        "< 1e-6",
        energy < 1e-6,
    );
    rows.push(
        "P14b",
        "det(ABCD) of the same cascades",
        format!("{det:.3e}"),
        "1".into(),
        "< 1e-9 from 1",
        det < 1e-9,
    );
    Ok(rows.0)
}

/// One to eight lossless elements with plausible values.
pub fn random_lossless_cascade<R: Rng>(rng: &mut R) -> Vec<NetworkElement> {
    let n = rng.gen_range(1..=8);
    (0..n)
        .map(|i| {
            let kind = match rng.gen_range(0..4) {
                0 | 1 => ElementKind::UniformLine {
                    impedance: rng.gen_range(5.0..150.0),
                    effective_permittivity: rng.gen_range(1.0..12.0),
                    length: rng.gen_range(0.0..0.05),
                },
                2 => ElementKind::SeriesImpedance {
                    resistance: 0.0,
                    inductance: rng.gen_range(0.0..2e-9),
                },
                _ => ElementKind::ShuntAdmittance {
                    capacitance: rng.gen_range(0.0..1e-12),
                },
            };
            NetworkElement::new(format!("e{i}"), kind)
        })
        .collect()
}

pub fn table(rows: &[GoldenRow]) -> Table {
    let mut t = Table::new(["id", "status", "description", "computed", "expected", "tolerance"]);
    for r in rows {
        t.push(vec![
            r.id.clone(),
            if r.pass { "PASS" } else { "FAIL" }.into(),
            r.description.clone(),
            r.computed.clone(),
            r.expected.clone(),
            r.tolerance.clone(),
        ]);
    }
    t
}

pub fn failures(rows: &[GoldenRow]) -> usize {
    rows.iter().filter(|r| !r.pass).count()
}
