//! Minimal deterministic SVG plots. Coordinates are printed with two
//! decimals so identical inputs give identical bytes.

use std::fmt::Write;

use clustat_core::Dendrogram;

use crate::analysis::{NamedMatrix, RegressionEntry, ValidationSection};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

pub struct Canvas {
    body: String,
    width: f64,
    height: f64,
}

impl Canvas {
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            body: String::new(),
            width,
            height,
        }
    }

    pub fn line(&mut self, class: &str, x1: f64, y1: f64, x2: f64, y2: f64) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black"/>"#
        );
    }

    pub fn polyline(&mut self, class: &str, color: &str, points: &[(f64, f64)]) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
    }

    pub fn circle(&mut self, class: &str, x: f64, y: f64, r: f64) {
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="steelblue"/>"#
        );
    }

    pub fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect class="{class}" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#
        );
    }

    pub fn path(&mut self, class: &str, d: &str) {
        let _ = writeln!(
            self.body,
            r#"<path class="{class}" d="{d}" fill="none" stroke="black"/>"#
        );
    }

    pub fn text(&mut self, x: f64, y: f64, anchor: &str, size: f64, content: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="{size:.0}">{}</text>"#,
            escape(content)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Maps a data interval onto a pixel interval; degenerate intervals map to the middle.
#[derive(Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Scale {
    fn new(values: impl IntoIterator<Item = f64>, from: f64, to: f64) -> Self {
        let (lo, hi) = values
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
        Self { lo, hi, from, to }
    }

    fn map(&self, v: f64) -> f64 {
        if self.hi > self.lo {
            self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
        } else {
            (self.from + self.to) / 2.0
        }
    }
}

fn axes(c: &mut Canvas, title: &str, x_label: &str, y_label: &str, x: Scale, y: Scale) {
    c.line(
        "axis",
        MARGIN,
        HEIGHT - MARGIN,
        WIDTH - MARGIN,
        HEIGHT - MARGIN,
    );
    c.line("axis", MARGIN, MARGIN, MARGIN, HEIGHT - MARGIN);
    c.text(WIDTH / 2.0, MARGIN / 2.0, "middle", 16.0, title);
    c.text(WIDTH / 2.0, HEIGHT - 15.0, "middle", 12.0, x_label);
    c.text(15.0, HEIGHT / 2.0, "middle", 12.0, y_label);
    c.text(MARGIN, HEIGHT - MARGIN + 15.0, "middle", 10.0, &short(x.lo));
    c.text(
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 15.0,
        "middle",
        10.0,
        &short(x.hi),
    );
    c.text(MARGIN - 5.0, HEIGHT - MARGIN, "end", 10.0, &short(y.lo));
    c.text(MARGIN - 5.0, MARGIN, "end", 10.0, &short(y.hi));
}

fn short(v: f64) -> String {
    format!("{v:.4}")
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

/// Scatter of the raw points with the least-squares line and the LOWESS curve.
pub fn scatter(entry: &RegressionEntry) -> String {
    let mut c = Canvas::new(WIDTH, HEIGHT);
    let xs = Scale::new(entry.points.iter().map(|p| p.0), MARGIN, WIDTH - MARGIN);
    let ys = Scale::new(
        entry
            .points
            .iter()
            .map(|p| p.1)
            .chain(entry.lowess.fitted.iter().map(|p| p.1)),
        HEIGHT - MARGIN,
        MARGIN,
    );
    axes(
        &mut c,
        &format!("{} vs {}", entry.y, entry.x),
        &entry.x,
        &entry.y,
        xs,
        ys,
    );
    for &(x, y) in &entry.points {
        c.circle("point", xs.map(x), ys.map(y), 3.0);
    }
    let line: Vec<(f64, f64)> = [xs.lo, xs.hi]
        .iter()
        .map(|&x| {
            (
                xs.map(x),
                ys.map(entry.linear.predict(x)).clamp(0.0, HEIGHT),
            )
        })
        .collect();
    c.polyline("linear", "firebrick", &line);
    let mut curve = entry.lowess.fitted.clone();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let curve: Vec<(f64, f64)> = curve.iter().map(|&(x, y)| (xs.map(x), ys.map(y))).collect();
    c.polyline("lowess", "darkgreen", &curve);
    c.finish()
}

/// Grey-scale heat map, darker for larger distances.
pub fn heatmap(m: &NamedMatrix) -> String {
    let n = m.names.len().max(1);
    let label_space = 110.0;
    let cell = ((WIDTH - label_space - 20.0) / n as f64).min(40.0);
    let size = label_space + cell * n as f64 + 20.0;
    let mut c = Canvas::new(size, size);
    let max = m.values.iter().flatten().copied().fold(0.0, f64::max);
    for (i, row) in m.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let shade = if max > 0.0 {
                255.0 * (1.0 - v / max)
            } else {
                255.0
            };
            let g = shade.round() as u8;
            let fill = format!("rgb({g},{g},{g})");
            c.rect(
                "cell",
                label_space + j as f64 * cell,
                label_space + i as f64 * cell,
                cell,
                cell,
                &fill,
            );
        }
    }
    for (i, name) in m.names.iter().enumerate() {
        let mid = label_space + (i as f64 + 0.5) * cell;
        c.text(label_space - 4.0, mid + 4.0, "end", 10.0, name);
        c.text(mid, label_space - 6.0, "middle", 8.0, name);
    }
    c.text(
        size / 2.0,
        20.0,
        "middle",
        14.0,
        &format!("{} distance", m.metric),
    );
    c.finish()
}

/// One `class="merge"` bracket per agglomeration step.
pub fn dendrogram(tree: &Dendrogram<f64>, ids: &[String]) -> String {
    let mut c = Canvas::new(WIDTH, HEIGHT);
    let n = tree.n_leaves;
    let order = tree.leaf_order();
    let step = (WIDTH - 2.0 * MARGIN) / n.max(2).saturating_sub(1) as f64;
    let ys = Scale::new(
        std::iter::once(0.0).chain(tree.heights()),
        HEIGHT - MARGIN,
        MARGIN,
    );

    // (x, y) of every node, leaves first
    let mut pos = vec![(0.0, 0.0); n + tree.merges.len()];
    for (slot, &leaf) in order.iter().enumerate() {
        pos[leaf] = (MARGIN + slot as f64 * step, ys.map(0.0));
        let label = ids.get(leaf).map(String::as_str).unwrap_or("");
        c.text(pos[leaf].0, HEIGHT - MARGIN + 14.0, "middle", 9.0, label);
    }
    for (i, m) in tree.merges.iter().enumerate() {
        let (lx, ly) = pos[m.left];
        let (rx, ry) = pos[m.right];
        let y = ys.map(m.height);
        c.path(
            "merge",
            &format!("M{lx:.2},{ly:.2} V{y:.2} H{rx:.2} V{ry:.2}"),
        );
        pos[n + i] = ((lx + rx) / 2.0, y);
    }
    c.line("axis", MARGIN / 2.0, MARGIN, MARGIN / 2.0, HEIGHT - MARGIN);
    c.text(MARGIN / 2.0 - 4.0, MARGIN, "end", 10.0, &short(ys.hi));
    c.text(
        WIDTH / 2.0,
        MARGIN / 2.0,
        "middle",
        16.0,
        &format!("{} linkage, {}", tree.linkage, tree.metric),
    );
    c.finish()
}

/// Silhouette, gap and SSW against k, side by side.
pub fn validation_curves(v: &ValidationSection) -> String {
    let panel = WIDTH / 3.0;
    let mut c = Canvas::new(WIDTH * 1.5, HEIGHT);
    let ks: Vec<f64> = v.rows.iter().map(|r| r.k as f64).collect();
    let series: [(&str, Vec<Option<f64>>); 3] = [
        ("silhouette", v.rows.iter().map(|r| r.silhouette).collect()),
        ("gap", v.rows.iter().map(|r| Some(r.gap)).collect()),
        ("ssw", v.rows.iter().map(|r| Some(r.ssw)).collect()),
    ];
    for (p, (name, values)) in series.iter().enumerate() {
        let left = p as f64 * panel * 1.5 + MARGIN / 2.0;
        let right = left + panel * 1.5 - MARGIN;
        let xs = Scale::new(ks.iter().copied(), left, right);
        let mut lows: Vec<f64> = values.iter().flatten().copied().collect();
        if *name == "gap" {
            lows.extend(
                v.rows
                    .iter()
                    .flat_map(|r| [r.gap - r.gap_s, r.gap + r.gap_s]),
            );
        }
        let ys = Scale::new(lows, HEIGHT - MARGIN, MARGIN);
        c.line("axis", left, HEIGHT - MARGIN, right, HEIGHT - MARGIN);
        c.line("axis", left, MARGIN, left, HEIGHT - MARGIN);
        c.text((left + right) / 2.0, MARGIN / 2.0, "middle", 14.0, name);
        let pts: Vec<(f64, f64)> = ks
            .iter()
            .zip(values)
            .filter_map(|(&k, v)| v.map(|v| (xs.map(k), ys.map(v))))
            .collect();
        c.polyline("series", "steelblue", &pts);
        for &(x, y) in &pts {
            c.circle("point", x, y, 3.0);
        }
        if *name == "gap" {
            for r in &v.rows {
                let x = xs.map(r.k as f64);
                c.line(
                    "errorbar",
                    x,
                    ys.map(r.gap - r.gap_s),
                    x,
                    ys.map(r.gap + r.gap_s),
                );
            }
        }
        for &k in &ks {
            c.text(
                xs.map(k),
                HEIGHT - MARGIN + 15.0,
                "middle",
                10.0,
                &format!("{k}"),
            );
        }
        c.text(left - 4.0, MARGIN, "end", 10.0, &short(ys.hi));
        c.text(left - 4.0, HEIGHT - MARGIN, "end", 10.0, &short(ys.lo));
    }
    c.finish()
}

/// Horizontal bars per point, grouped by cluster and sorted within each.
pub fn silhouette_profile(per_point: &[f64], labels: &[Option<usize>]) -> String {
    let mut order: Vec<usize> = (0..per_point.len()).collect();
    order.sort_by(|&a, &b| {
        labels[a]
            .cmp(&labels[b])
            .then(per_point[b].total_cmp(&per_point[a]))
            .then(a.cmp(&b))
    });
    let bar = ((HEIGHT - 2.0 * MARGIN) / per_point.len().max(1) as f64).min(12.0);
    let mut c = Canvas::new(WIDTH, HEIGHT);
    let xs = Scale::new([-1.0, 1.0], MARGIN, WIDTH - MARGIN);
    let zero = xs.map(0.0);
    let palette = [
        "steelblue",
        "darkorange",
        "seagreen",
        "firebrick",
        "mediumpurple",
        "saddlebrown",
    ];
    for (row, &i) in order.iter().enumerate() {
        let v = per_point[i];
        let (x, w) = if v >= 0.0 {
            (zero, xs.map(v) - zero)
        } else {
            (xs.map(v), zero - xs.map(v))
        };
        let color = palette[labels[i].unwrap_or(0) % palette.len()];
        c.rect("bar", x, MARGIN + row as f64 * bar, w, bar * 0.9, color);
    }
    c.line("axis", zero, MARGIN, zero, HEIGHT - MARGIN);
    c.line(
        "axis",
        MARGIN,
        HEIGHT - MARGIN,
        WIDTH - MARGIN,
        HEIGHT - MARGIN,
    );
    c.text(MARGIN, HEIGHT - MARGIN + 15.0, "middle", 10.0, "-1");
    c.text(zero, HEIGHT - MARGIN + 15.0, "middle", 10.0, "0");
    c.text(WIDTH - MARGIN, HEIGHT - MARGIN + 15.0, "middle", 10.0, "1");
    c.text(WIDTH / 2.0, MARGIN / 2.0, "middle", 16.0, "silhouette");
    c.finish()
}
