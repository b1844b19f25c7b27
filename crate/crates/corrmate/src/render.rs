//! Deterministic raster output: per-pixel orbit classification of a
//! correspondence and density images of grand-orbit point clouds. The
//! contract format is binary PPM (P6); PNG encoding is available behind the
//! same pixel buffer.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::corr::{Classification, Correspondence, DomainSpec, Label};
use crate::error::Error;
use crate::sphere::SpherePoint;

/// A raster request: viewport, resolution, and iteration budget.
#[derive(Debug, Clone, Copy)]
pub struct RasterJob {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub width: u32,
    pub height: u32,
    pub max_iter: u32,
    pub palette: u32,
    /// Render the reciprocal chart: a pixel at `w` shows the point `1/w`,
    /// so the viewport center covers infinity.
    pub reciprocal_chart: bool,
}

impl RasterJob {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.x0 < self.x1 && self.y0 < self.y1) {
            return Err(Error::BadRenderJob("degenerate viewport".into()));
        }
        if self.width == 0 || self.height == 0 || self.width > 16384 || self.height > 16384 {
            return Err(Error::BadRenderJob(format!(
                "resolution {}x{} out of range",
                self.width, self.height
            )));
        }
        Ok(())
    }

    /// Center of pixel `(i, j)`; row 0 is the top of the viewport.
    pub fn pixel_center(&self, i: u32, j: u32) -> Complex64 {
        let x = self.x0 + (i as f64 + 0.5) * (self.x1 - self.x0) / self.width as f64;
        let y = self.y1 - (j as f64 + 0.5) * (self.y1 - self.y0) / self.height as f64;
        Complex64::new(x, y)
    }

    /// Pixel indices of a point, if inside the viewport.
    pub fn pixel_of(&self, z: Complex64) -> Option<(u32, u32)> {
        let fx = (z.re - self.x0) / (self.x1 - self.x0);
        let fy = (self.y1 - z.im) / (self.y1 - self.y0);
        if !(0.0..1.0).contains(&fx) || !(0.0..1.0).contains(&fy) {
            return None;
        }
        Some((
            ((fx * self.width as f64) as u32).min(self.width - 1),
            ((fy * self.height as f64) as u32).min(self.height - 1),
        ))
    }
}

/// RGB pixel buffer, row-major from the top-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn new(width: u32, height: u32) -> Self {
        Image {
            width,
            height,
            pixels: vec![[0, 0, 0]; (width * height) as usize],
        }
    }

    pub fn put(&mut self, i: u32, j: u32, rgb: [u8; 3]) {
        self.pixels[(j * self.width + i) as usize] = rgb;
    }

    pub fn get(&self, i: u32, j: u32) -> [u8; 3] {
        self.pixels[(j * self.width + i) as usize]
    }

    /// Binary PPM (P6) encoding; byte-identical for identical pixel data.
    pub fn write_ppm<W: Write>(&self, mut w: W) -> Result<(), Error> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        for px in &self.pixels {
            w.write_all(px)?;
        }
        Ok(())
    }

    pub fn to_ppm_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3 + 32);
        self.write_ppm(&mut out).expect("in-memory write");
        out
    }

    /// Saves by extension: `.png` via the PNG codec, anything else as PPM.
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        if path.extension().map(|e| e == "png").unwrap_or(false) {
            let flat: Vec<u8> = self.pixels.iter().flatten().copied().collect();
            image::save_buffer(
                path,
                &flat,
                self.width,
                self.height,
                image::ColorType::Rgb8,
            )
            .map_err(|e| Error::BadRenderJob(format!("png encode: {e}")))?;
            Ok(())
        } else {
            let mut f = std::fs::File::create(path)?;
            self.write_ppm(&mut f)
        }
    }
}

/// Classification raster: labels plus escape ranks, kept alongside the image
/// for consistency checks and binary export.
#[derive(Debug, Clone)]
pub struct LabelGrid {
    pub width: u32,
    pub height: u32,
    pub cells: Vec<Classification>,
}

impl LabelGrid {
    pub fn get(&self, i: u32, j: u32) -> Classification {
        self.cells[(j * self.width + i) as usize]
    }

    /// Binary export: magic, little-endian dimensions, then one
    /// (label, clamped rank) byte pair per pixel in row-major order.
    pub fn write_bin<W: Write>(&self, mut w: W) -> Result<(), Error> {
        w.write_all(b"CMLB1\0")?;
        w.write_all(&self.width.to_le_bytes())?;
        w.write_all(&self.height.to_le_bytes())?;
        for c in &self.cells {
            let label = match c.label {
                Label::Tiling => 0u8,
                Label::K1 => 1,
                Label::K2 => 2,
                Label::Undecided => 3,
            };
            w.write_all(&[label, c.rank.min(255) as u8])?;
        }
        Ok(())
    }
}

fn label_color(c: &Classification, max_iter: u32, palette: u32) -> [u8; 3] {
    let rank_shade = |base: [u8; 3]| -> [u8; 3] {
        let t = (c.rank.min(max_iter) * 160 / max_iter.max(1)) as i32;
        [
            (base[0] as i32 - t).clamp(24, 255) as u8,
            (base[1] as i32 - t).clamp(24, 255) as u8,
            (base[2] as i32 - t).clamp(24, 255) as u8,
        ]
    };
    match (palette, c.label) {
        (_, Label::Tiling) => rank_shade([64, 110, 240]),
        (_, Label::K1) => [240, 200, 60],
        (_, Label::K2) => [210, 80, 40],
        (_, Label::Undecided) => [128, 128, 128],
    }
}

/// Classifies every pixel center and colors it by label with escape-rank
/// shading. Rows are classified in parallel; the output is deterministic for
/// a fixed job.
pub fn render_classification(
    corr: &Correspondence,
    dom: &DomainSpec,
    job: &RasterJob,
) -> Result<(Image, LabelGrid), Error> {
    job.validate()?;
    corr.audit_domain(dom)?;
    let rows: Result<Vec<Vec<Classification>>, Error> = (0..job.height)
        .into_par_iter()
        .map(|j| {
            let mut row = Vec::with_capacity(job.width as usize);
            for i in 0..job.width {
                let w = job.pixel_center(i, j);
                let z = if job.reciprocal_chart {
                    SpherePoint::Finite(w).eta()
                } else {
                    SpherePoint::Finite(w)
                };
                row.push(corr.classify_point(z, dom, job.max_iter)?);
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let mut img = Image::new(job.width, job.height);
    let mut cells = Vec::with_capacity((job.width * job.height) as usize);
    for (j, row) in rows.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            img.put(i as u32, j as u32, label_color(c, job.max_iter, job.palette));
            cells.push(*c);
        }
    }
    Ok((
        img,
        LabelGrid {
            width: job.width,
            height: job.height,
            cells,
        },
    ))
}

/// Accumulation density of a point cloud on the viewport grid,
/// logarithmically shaded. Infinite points are skipped.
pub fn render_cloud(job: &RasterJob, cloud: &[SpherePoint]) -> Result<Image, Error> {
    job.validate()?;
    let mut counts = vec![0u32; (job.width * job.height) as usize];
    for z in cloud {
        if let Some(z) = z.finite() {
            if let Some((i, j)) = job.pixel_of(z) {
                counts[(j * job.width + i) as usize] += 1;
            }
        }
    }
    let max = counts.iter().copied().max().unwrap_or(0).max(1);
    let lmax = (1.0 + max as f64).ln();
    let mut img = Image::new(job.width, job.height);
    for (k, c) in counts.iter().enumerate() {
        if *c > 0 {
            let v = (255.0 * (1.0 + *c as f64).ln() / lmax) as u8;
            img.pixels[k] = [v, v.saturating_sub(30), 255u8.saturating_sub(v / 3)];
        }
    }
    Ok(img)
}
