use num_complex::Complex64;
use serde::Serialize;

use super::PlanesError;

/// Rectangular window of the plane sampled at pixel centres.
///
/// Pixel `(i, j)` has centre
/// `x = cx + (2i + 1 - cols) w / (2 cols)`, `y = cy + (rows - 1 - 2j) h / (2 rows)`,
/// so row 0 is the top and a window centred on the real axis is mirrored
/// exactly by `j -> rows - 1 - j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    #[serde(serialize_with = "crate::point::serialize_complex")]
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
    pub columns: usize,
    pub rows: usize,
}

impl Window {
    pub fn new(
        center: Complex64,
        width: f64,
        height: f64,
        columns: usize,
        rows: usize,
    ) -> Result<Self, PlanesError> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(PlanesError::InvalidWindow(format!(
                "extent {width} x {height}"
            )));
        }
        if columns == 0 || rows == 0 {
            return Err(PlanesError::InvalidWindow(format!(
                "size {columns} x {rows}"
            )));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(PlanesError::InvalidWindow("non-finite centre".into()));
        }
        Ok(Window {
            center,
            width,
            height,
            columns,
            rows,
        })
    }

    /// Square window `[-r, r]^2` around the origin.
    pub fn square(radius: f64, size: usize) -> Result<Self, PlanesError> {
        Window::new(
            Complex64::new(0.0, 0.0),
            2.0 * radius,
            2.0 * radius,
            size,
            size,
        )
    }

    /// Parse `cx,cy,w,h` and `COLSxROWS`.
    pub fn parse(spec: &str, size: &str) -> Result<Self, PlanesError> {
        let bad =
            || PlanesError::InvalidWindow(format!("cannot parse window {spec:?} / size {size:?}"));
        let v: Vec<f64> = spec
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if v.len() != 4 {
            return Err(bad());
        }
        let (c, r) = size.split_once(['x', 'X']).ok_or_else(bad)?;
        let columns = c.trim().parse().map_err(|_| bad())?;
        let rows = r.trim().parse().map_err(|_| bad())?;
        Window::new(Complex64::new(v[0], v[1]), v[2], v[3], columns, rows)
    }

    pub fn len(&self) -> usize {
        self.columns * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pixel_width(&self) -> f64 {
        self.width / self.columns as f64
    }

    pub fn pixel_height(&self) -> f64 {
        self.height / self.rows as f64
    }

    pub fn pixel_area(&self) -> f64 {
        self.pixel_width() * self.pixel_height()
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let x = (2 * i + 1) as f64 - self.columns as f64;
        let y = self.rows as f64 - (2 * j + 1) as f64;
        Complex64::new(
            self.center.re + x * self.width / (2 * self.columns) as f64,
            self.center.im + y * self.height / (2 * self.rows) as f64,
        )
    }

    /// Pixel containing `z`, if inside the window.
    pub fn pixel(&self, z: Complex64) -> Option<(usize, usize)> {
        let u =
            (z.re - self.center.re) * self.columns as f64 / self.width + self.columns as f64 / 2.0;
        let v = self.rows as f64 / 2.0 - (z.im - self.center.im) * self.rows as f64 / self.height;
        if !(u >= 0.0 && v >= 0.0) {
            return None;
        }
        let (i, j) = (u.floor() as usize, v.floor() as usize);
        (i < self.columns && j < self.rows).then_some((i, j))
    }

    /// Same extent at a different resolution.
    pub fn resized(&self, columns: usize, rows: usize) -> Result<Self, PlanesError> {
        Window::new(self.center, self.width, self.height, columns, rows)
    }

    /// Largest modulus over the window corners.
    pub fn max_modulus(&self) -> f64 {
        let hw = self.width / 2.0;
        let hh = self.height / 2.0;
        [(-hw, -hh), (-hw, hh), (hw, -hh), (hw, hh)]
            .iter()
            .map(|&(x, y)| (self.center + Complex64::new(x, y)).norm())
            .fold(0.0, f64::max)
    }

    /// True when the window contains the closed disk of radius `r` about 0.
    pub fn covers_disk(&self, r: f64) -> bool {
        let hw = self.width / 2.0;
        let hh = self.height / 2.0;
        self.center.re - hw <= -r
            && self.center.re + hw >= r
            && self.center.im - hh <= -r
            && self.center.im + hh >= r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let w = Window::new(Complex64::new(-0.5, 0.25), 3.0, 2.0, 301, 200).unwrap();
        for j in [0, 1, 99, 199] {
            for i in [0, 150, 300] {
                assert_eq!(w.pixel(w.point(i, j)), Some((i, j)));
            }
        }
        assert_eq!(w.pixel(Complex64::new(10.0, 0.0)), None);
    }

    #[test]
    fn mirror_is_exact() {
        let w = Window::square(2.0, 64).unwrap();
        for j in 0..64 {
            for i in 0..64 {
                let a = w.point(i, j);
                let b = w.point(i, 63 - j);
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), (-b.im).to_bits());
            }
        }
    }

    #[test]
    fn parsing() {
        let w = Window::parse("0,0,4,4", "800x600").unwrap();
        assert_eq!((w.columns, w.rows, w.width), (800, 600, 4.0));
        assert!(Window::parse("0,0,4", "8x8").is_err());
        assert!(Window::parse("0,0,-4,4", "8x8").is_err());
    }
}
