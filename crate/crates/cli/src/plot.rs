//! Minimal deterministic SVG line plots built straight from the data that
//! goes into the CSV tables. Plot generation never gates an exit code: a
//! series with nothing drawable simply yields no file.

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 78.0;
const RIGHT: f64 = 692.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 420.0;
const PALETTE: [&str; 6] = [
    "#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#d68910", "#17788d",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Renders a line plot; log axes drop nonpositive points. Returns `None`
/// when fewer than two points survive.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    log_x: bool,
    log_y: bool,
    series: &[Series],
) -> Option<String> {
    let map = |v: f64, log: bool| -> Option<f64> {
        if !v.is_finite() {
            return None;
        }
        if log {
            (v > 0.0).then(|| v.log10())
        } else {
            Some(v)
        }
    };
    let mapped: Vec<(&str, Vec<(f64, f64)>)> = series
        .iter()
        .map(|s| {
            let pts = s
                .points
                .iter()
                .filter_map(|&(x, y)| Some((map(x, log_x)?, map(y, log_y)?)))
                .collect();
            (s.label.as_str(), pts)
        })
        .collect();
    let total: usize = mapped.iter().map(|(_, p)| p.len()).sum();
    if total < 2 {
        return None;
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in &mapped {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_max - x_min < 1e-12 {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_max - y_min < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * (RIGHT - LEFT);
    let sy = |y: f64| BOTTOM - (y - y_min) / (y_max - y_min) * (BOTTOM - TOP);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
        RIGHT - LEFT,
        BOTTOM - TOP
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        (LEFT + RIGHT) / 2.0,
        escape(title)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        escape(y_label)
    ));

    // ticks: 5 per axis at equal steps of the (possibly log) coordinate
    for i in 0..5 {
        let f = i as f64 / 4.0;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let xpix = sx(xv);
        let ypix = sy(yv);
        svg.push_str(&format!(
            "<line x1=\"{xpix:.2}\" y1=\"{BOTTOM}\" x2=\"{xpix:.2}\" y2=\"{}\" stroke=\"#444\"/>\n",
            BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{xpix:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            BOTTOM + 20.0,
            tick_label(xv, log_x)
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ypix:.2}\" x2=\"{LEFT}\" y2=\"{ypix:.2}\" stroke=\"#444\"/>\n",
            LEFT - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            LEFT - 9.0,
            ypix + 4.0,
            tick_label(yv, log_y)
        ));
    }

    for (si, (label, pts)) in mapped.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        if pts.len() >= 2 {
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                path.join(" ")
            ));
        }
        for &(x, y) in pts {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                sx(x),
                sy(y)
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{}</text>\n",
            RIGHT - 170.0,
            TOP + 18.0 + 16.0 * si as f64,
            escape(label)
        ));
    }
    svg.push_str("</svg>\n");
    Some(svg)
}

fn tick_label(v: f64, log: bool) -> String {
    let value = if log { 10f64.powf(v) } else { v };
    if value != 0.0 && (value.abs() >= 1e4 || value.abs() < 1e-3) {
        format!("{value:.2e}")
    } else {
        format!("{value:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_renders_and_is_deterministic() {
        let series = [Series {
            label: "|k|=1".into(),
            points: vec![(1.0, 2.0), (2.0, 4.0), (4.0, 8.0)],
        }];
        let a = line_plot("growth", "cutoff", "value", true, true, &series).unwrap();
        let b = line_plot("growth", "cutoff", "value", true, true, &series).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polyline"));
        assert!(a.contains("|k|=1"));
    }

    #[test]
    fn unplottable_data_yields_none_not_errors() {
        assert!(line_plot("t", "x", "y", false, false, &[]).is_none());
        let series = [Series {
            label: "bad".into(),
            points: vec![(f64::NAN, 1.0), (-1.0, -2.0)],
        }];
        assert!(line_plot("t", "x", "y", true, true, &series).is_none());
    }

    #[test]
    fn log_axes_drop_nonpositive_points_only() {
        let series = [Series {
            label: "mixed".into(),
            points: vec![(1.0, 1.0), (2.0, -1.0), (4.0, 2.0)],
        }];
        let svg = line_plot("t", "x", "y", true, true, &series).unwrap();
        // two survivors drawn
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
