/// IEEE test systems shipped with the crate, by name.
pub const BUNDLED_CASES: [&str; 6] = ["case14", "case30", "case39", "case57", "case118", "case300"];

pub fn bundled_case(name: &str) -> Option<&'static str> {
    Some(match name {
        "case14" => include_str!("../../data/cases/case14.m"),
        "case30" => include_str!("../../data/cases/case30.m"),
        "case39" => include_str!("../../data/cases/case39.m"),
        "case57" => include_str!("../../data/cases/case57.m"),
        "case118" => include_str!("../../data/cases/case118.m"),
        "case300" => include_str!("../../data/cases/case300.m"),
        _ => return None,
    })
}
