use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};
use stabglue::doublecover::{LineBundleCertificate, PhaseBounds};
use stabglue::exact::format_q;
use stabglue::glue::GluingProof;
use stabglue::par::{ChamberCell, GRID_IM, GRID_RE};
use stabglue::slicing::{PhaseDisplay, PhaseLiftJson};

use crate::CliError;

/// Pretty JSON with keys sorted, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let value = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn phase_json(p: &stabglue::exact::PhaseLift) -> Value {
    json!({ "phase": PhaseDisplay::from(p), "exact": PhaseLiftJson::from(p) })
}

fn bounds_json(b: &PhaseBounds) -> Value {
    json!({
        "lower": phase_json(&b.lower),
        "lower_open": b.lower_open,
        "upper": phase_json(&b.upper),
        "upper_open": b.upper_open,
    })
}

pub fn certificate_json(c: &LineBundleCertificate) -> Value {
    let quotients: Vec<Value> = c
        .quotients
        .iter()
        .map(|q| json!({ "point": q.point + 1, "twist": q.twist, "phase": phase_json(&q.phase) }))
        .collect();
    json!({
        "object": c.object.to_string(),
        "sub": c.sub.to_string(),
        "quotients": quotients,
        "bounds": bounds_json(&c.bounds),
        "charge_phase": phase_json(&c.charge_phase),
    })
}

pub fn proof_name(p: &GluingProof) -> String {
    match p {
        GluingProof::Parameter(a) => format!("parameter {}", format_q(a)),
        GluingProof::DiscreteImage => "discrete image".into(),
        GluingProof::StrongOrthogonality => "strong orthogonality".into(),
        GluingProof::FiniteLength => "finite length".into(),
    }
}

/// `row,col,re,im,code`; cells on the branch cut have code `cut`.
pub fn chambers_csv(cells: &[ChamberCell]) -> String {
    let mut out = String::from("row,col,re,im,code\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.row,
            c.col,
            c.re,
            c.im,
            c.code.as_deref().unwrap_or("cut")
        );
    }
    out
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

/// Square cells coloured by chamber code, with a legend of the codes in order of appearance.
pub fn chambers_svg(cells: &[ChamberCell], grid: usize) -> String {
    const SIZE: f64 = 600.0;
    const LEGEND: f64 = 220.0;
    let cell = SIZE / grid as f64;
    let mut codes: Vec<&str> = Vec::new();
    for c in cells {
        let code = c.code.as_deref().unwrap_or("cut");
        if !codes.contains(&code) {
            codes.push(code);
        }
    }
    let colour = |code: &str| -> &str {
        match codes.iter().position(|&k| k == code) {
            _ if code == "cut" => "#000000",
            Some(k) => PALETTE[k % PALETTE.len()],
            None => "#ffffff",
        }
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{SIZE}" viewBox="0 0 {} {SIZE}">"#,
        SIZE + LEGEND,
        SIZE + LEGEND
    );
    let _ = writeln!(
        out,
        "<title>chambers over Re in [{}, {}], Im in [{}, {}]</title>",
        GRID_RE.0, GRID_RE.1, GRID_IM.0, GRID_IM.1
    );
    for c in cells {
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
            c.col as f64 * cell,
            c.row as f64 * cell,
            cell,
            cell,
            colour(c.code.as_deref().unwrap_or("cut"))
        );
    }
    for (k, code) in codes.iter().enumerate() {
        let y = 20.0 + 24.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{y}" width="16" height="16" fill="{}"/>"#,
            SIZE + 12.0,
            colour(code)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="13">{code}</text>"#,
            SIZE + 36.0,
            y + 13.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(row: usize, col: usize, code: Option<&str>) -> ChamberCell {
        ChamberCell {
            row,
            col,
            re: col as f64,
            im: -(row as f64),
            code: code.map(str::to_string),
        }
    }

    #[test]
    fn csv_marks_the_cut() {
        let text = chambers_csv(&[cell(0, 0, Some("SSSU")), cell(0, 1, None)]);
        assert_eq!(text, "row,col,re,im,code\n0,0,0,-0,SSSU\n0,1,1,-0,cut\n");
    }

    #[test]
    fn svg_has_one_rect_per_cell_and_legend() {
        let cells = [
            cell(0, 0, Some("SSSU")),
            cell(0, 1, Some("SUSU")),
            cell(1, 0, None),
            cell(1, 1, Some("SSSU")),
        ];
        let svg = chambers_svg(&cells, 2);
        assert_eq!(svg.matches("<rect").count(), 4 + 3);
        assert_eq!(svg.matches("<text").count(), 3);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn json_keys_are_sorted() {
        let text = to_json(&json!({ "b": 1, "a": { "d": 2, "c": 3 } })).unwrap();
        let order: Vec<usize> = ["\"a\"", "\"c\"", "\"d\"", "\"b\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }
}
