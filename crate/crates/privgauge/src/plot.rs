//! Classification scatter plots over the first two feature axes.
//!
//! Two artifacts: a plot-data text file (one record per line with its
//! coordinates, true class, and predicted class) and a self-contained SVG
//! rendering. Correctly classified records are filled circles colored by
//! class; misclassified records are crosses. Output is fully
//! deterministic.

use std::io::Write;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evaluate::CvResult;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    pub true_class: String,
    pub predicted_class: String,
}

impl PlotPoint {
    pub fn is_correct(&self) -> bool {
        self.true_class == self.predicted_class
    }
}

/// Per-record classification outcomes projected onto two feature axes.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub axis_x: String,
    pub axis_y: String,
    pub points: Vec<PlotPoint>,
}

impl PlotData {
    /// Extracts plot data from a finished cross-validation run, using the
    /// first two feature axes.
    pub fn from_result(data: &Dataset, result: &CvResult) -> Result<PlotData> {
        if data.n_attributes() < 2 {
            return Err(Error::Usage(
                "plotting needs at least two feature attributes".into(),
            ));
        }
        if result.predictions.len() != data.n_records() {
            return Err(Error::Usage(format!(
                "{} predictions for {} records",
                result.predictions.len(),
                data.n_records()
            )));
        }
        let points = (0..data.n_records())
            .map(|i| PlotPoint {
                index: i,
                x: data.feature(i, 0),
                y: data.feature(i, 1),
                true_class: data.label_name(i).to_string(),
                predicted_class: data.class_names()[result.predictions[i]].clone(),
            })
            .collect();
        Ok(PlotData {
            axis_x: data.attribute_names()[0].clone(),
            axis_y: data.attribute_names()[1].clone(),
            points,
        })
    }

    pub fn misclassified(&self) -> usize {
        self.points.iter().filter(|p| !p.is_correct()).count()
    }

    /// Writes the plot-data text layout:
    /// two `# axis_…` comments, a header line, then one CSV row per record.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# axis_x={}", self.axis_x)?;
        writeln!(w, "# axis_y={}", self.axis_y)?;
        writeln!(w, "index,x,y,true_class,predicted_class")?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{},{}",
                p.index, p.x, p.y, p.true_class, p.predicted_class
            )?;
        }
        Ok(())
    }

    pub fn parse_text(text: &str) -> Result<PlotData> {
        let mut axis_x = String::from("x");
        let mut axis_y = String::from("y");
        let mut points = Vec::new();
        let mut saw_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = (idx + 1) as u64;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((k, v)) = comment.trim().split_once('=') {
                    match k.trim() {
                        "axis_x" => axis_x = v.trim().to_string(),
                        "axis_y" => axis_y = v.trim().to_string(),
                        _ => {}
                    }
                }
                continue;
            }
            if !saw_header {
                if line != "index,x,y,true_class,predicted_class" {
                    return Err(Error::parse(line_no, "unrecognized plot-data header"));
                }
                saw_header = true;
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 5 {
                return Err(Error::parse(
                    line_no,
                    format!("expected 5 columns, found {}", cells.len()),
                ));
            }
            let index = cells[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad index {:?}", cells[0])))?;
            let x: f64 = cells[1]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad x value {:?}", cells[1])))?;
            let y: f64 = cells[2]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad y value {:?}", cells[2])))?;
            points.push(PlotPoint {
                index,
                x,
                y,
                true_class: cells[3].to_string(),
                predicted_class: cells[4].to_string(),
            });
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("plot data has no records".into()));
        }
        Ok(PlotData {
            axis_x,
            axis_y,
            points,
        })
    }

    /// Class names in order of first appearance among true labels.
    fn classes(&self) -> Vec<&str> {
        let mut classes: Vec<&str> = Vec::new();
        for p in &self.points {
            if !classes.contains(&p.true_class.as_str()) {
                classes.push(&p.true_class);
            }
        }
        classes
    }

    /// Renders a self-contained SVG scatter plot.
    pub fn render_svg<W: Write>(&self, mut w: W, title: &str) -> Result<()> {
        const WIDTH: f64 = 640.0;
        const HEIGHT: f64 = 480.0;
        const MARGIN_L: f64 = 62.0;
        const MARGIN_R: f64 = 160.0;
        const MARGIN_T: f64 = 42.0;
        const MARGIN_B: f64 = 48.0;

        let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        // pad degenerate and ordinary ranges alike
        let pad = |lo: f64, hi: f64| {
            let span = hi - lo;
            if span == 0.0 {
                (lo - 1.0, hi + 1.0)
            } else {
                (lo - 0.05 * span, hi + 0.05 * span)
            }
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);

        let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = |y: f64| HEIGHT - MARGIN_B - (y - y0) / (y1 - y0) * (HEIGHT - MARGIN_T - MARGIN_B);

        let classes = self.classes();
        let color_of = |class: &str| {
            let idx = classes.iter().position(|c| *c == class).unwrap_or(0);
            PALETTE[idx % PALETTE.len()]
        };

        writeln!(
            w,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        )?;
        writeln!(w, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>")?;
        writeln!(
            w,
            "<text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
            (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
            escape(title)
        )?;

        // axes
        writeln!(
            w,
            "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#444\"/>",
            WIDTH - MARGIN_L - MARGIN_R,
            HEIGHT - MARGIN_T - MARGIN_B
        )?;
        for i in 0..=4 {
            let fx = x0 + (x1 - x0) * i as f64 / 4.0;
            let fy = y0 + (y1 - y0) * i as f64 / 4.0;
            writeln!(
                w,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.2}</text>",
                px(fx),
                HEIGHT - MARGIN_B + 16.0,
                fx
            )?;
            writeln!(
                w,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>",
                MARGIN_L - 6.0,
                py(fy) + 4.0,
                fy
            )?;
        }
        writeln!(
            w,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
            HEIGHT - 10.0,
            escape(&self.axis_x)
        )?;
        writeln!(
            w,
            "<text x=\"16\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>",
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            escape(&self.axis_y)
        )?;

        // points: circles for hits, crosses for misses
        for p in &self.points {
            let (cx, cy) = (px(p.x), py(p.y));
            let color = color_of(&p.true_class);
            if p.is_correct() {
                writeln!(
                    w,
                    "<circle class=\"hit\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3.5\" fill=\"{color}\" fill-opacity=\"0.75\"/>"
                )?;
            } else {
                writeln!(
                    w,
                    "<path class=\"miss\" d=\"M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}\" stroke=\"{color}\" stroke-width=\"2.2\"/>",
                    cx - 4.0,
                    cy - 4.0,
                    cx + 4.0,
                    cy + 4.0,
                    cx - 4.0,
                    cy + 4.0,
                    cx + 4.0,
                    cy - 4.0
                )?;
            }
        }

        // legend
        let lx = WIDTH - MARGIN_R + 14.0;
        let mut ly = MARGIN_T + 10.0;
        for class in &classes {
            writeln!(
                w,
                "<circle cx=\"{lx}\" cy=\"{:.1}\" r=\"3.5\" fill=\"{}\"/>",
                ly - 4.0,
                color_of(class)
            )?;
            writeln!(
                w,
                "<text x=\"{:.1}\" y=\"{ly}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
                lx + 10.0,
                escape(class)
            )?;
            ly += 18.0;
        }
        writeln!(
            w,
            "<path d=\"M{:.1} {:.1}L{:.1} {:.1}M{:.1} {:.1}L{:.1} {:.1}\" stroke=\"#444\" stroke-width=\"2.2\"/>",
            lx - 4.0,
            ly - 8.0,
            lx + 4.0,
            ly,
            lx - 4.0,
            ly,
            lx + 4.0,
            ly - 8.0
        )?;
        writeln!(
            w,
            "<text x=\"{:.1}\" y=\"{ly}\" font-family=\"sans-serif\" font-size=\"11\">misclassified ({})</text>",
            lx + 10.0,
            self.misclassified()
        )?;
        writeln!(w, "</svg>")?;
        Ok(())
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::{cross_validate, CvConfig};
    use crate::knn::KnnConfig;

    fn sample_data() -> PlotData {
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.5, 0.5],
            vec![5.0, 5.0],
            vec![5.5, 5.5],
        ];
        let data = Dataset::from_rows(rows, vec!["A", "A", "B", "B"]).unwrap();
        let result = cross_validate(
            &data,
            &KnnConfig::with_k(1),
            &CvConfig {
                fold_count: 2,
                seed: 1,
                stratified: true,
            },
        )
        .unwrap();
        PlotData::from_result(&data, &result).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let plot = sample_data();
        let mut buf = Vec::new();
        plot.write_text(&mut buf).unwrap();
        let parsed = PlotData::parse_text(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(parsed, plot);
    }

    #[test]
    fn empty_plot_data_is_rejected() {
        let err = PlotData::parse_text("index,x,y,true_class,predicted_class\n").unwrap_err();
        assert!(matches!(err, Error::EmptyInput(_)));
    }

    #[test]
    fn svg_contains_every_record() {
        let plot = sample_data();
        let mut buf = Vec::new();
        plot.render_svg(&mut buf, "demo").unwrap();
        let svg = String::from_utf8(buf).unwrap();
        let marks = svg.matches("class=\"hit\"").count() + svg.matches("class=\"miss\"").count();
        assert_eq!(marks, plot.points.len());
        assert!(svg.contains("</svg>"));
    }

    #[test]
    fn one_attribute_cannot_be_plotted() {
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]], vec!["A", "B"]).unwrap();
        let result = cross_validate(
            &data,
            &KnnConfig::with_k(1),
            &CvConfig {
                fold_count: 2,
                seed: 0,
                stratified: false,
            },
        )
        .unwrap();
        assert!(PlotData::from_result(&data, &result).is_err());
    }
}
