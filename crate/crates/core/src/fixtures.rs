//! The bundled example inputs.

use crate::model::{parse_input, CylinderGraph};

pub const FIG1: &str = include_str!("../../../fixtures/fig1.json");
pub const FIG3: &str = include_str!("../../../fixtures/fig3.json");
pub const FIG4: &str = include_str!("../../../fixtures/fig4.json");
pub const FIG5: &str = include_str!("../../../fixtures/fig5.json");
pub const EX11_G0: &str = include_str!("../../../fixtures/ex11-g0.json");
pub const EX11_G1: &str = include_str!("../../../fixtures/ex11-g1.json");
pub const EX11_G2: &str = include_str!("../../../fixtures/ex11-g2.json");

pub const ALL: [(&str, &str); 7] = [
    ("fig1", FIG1),
    ("fig3", FIG3),
    ("fig4", FIG4),
    ("fig5", FIG5),
    ("ex11-g0", EX11_G0),
    ("ex11-g1", EX11_G1),
    ("ex11-g2", EX11_G2),
];

pub fn load(name: &str) -> CylinderGraph {
    let (_, doc) = ALL.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no fixture {name}"));
    parse_input(doc).expect("bundled fixture is valid")
}
