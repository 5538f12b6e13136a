//! The degenerate flat model and its cone quotient.
//!
//! Upstairs coordinates are (s_1..s_{m-2}, R, theta) for the metric
//! R^2 |dz|^2 + |ds|^2; the squaring map sends them downstairs to
//! (s, r, theta) with r = R^2, where the metric is the product of a flat
//! factor with a cone of total angle 2 pi beta.  Distances downstairs are
//! genuine cone geodesics (through the apex once the developed angle
//! exceeds pi), and the upstairs distance is defined by pushing forward,
//! which makes it scale exactly linearly under the anisotropic dilation
//! (s, R) -> (lambda s, sqrt(lambda) R).

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeGeometry {
    pub m: usize,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub s: Vec<f64>,
    pub radial: f64,
    pub angle: f64,
}

impl Point {
    pub fn new(s: Vec<f64>, radial: f64, angle: f64) -> Self {
        Point { s, radial, angle }
    }
}

impl ConeGeometry {
    /// The flat model over C^{n-1} x C with the squared cigar direction,
    /// ambient real dimension m = 2n and cone factor beta = 2.
    pub fn flat_model(n: usize) -> Self {
        assert!(n >= 2, "the model needs at least one flat complex direction");
        ConeGeometry {
            m: 2 * n,
            beta: 2.0,
        }
    }

    pub fn flat_directions(&self) -> usize {
        self.m - 2
    }

    /// (s, R, theta) -> (s, R^2, theta).
    pub fn pi2_pushforward(&self, p: &Point) -> Point {
        Point {
            s: p.s.clone(),
            radial: p.radial * p.radial,
            angle: p.angle,
        }
    }

    /// (s, r, theta) -> (s, sqrt(r), theta), the branch with R >= 0.
    pub fn pi2_pullback(&self, p: &Point) -> Point {
        Point {
            s: p.s.clone(),
            radial: p.radial.sqrt(),
            angle: p.angle,
        }
    }

    /// The dilation (s, R, theta) -> (lambda s, sqrt(lambda) R, theta) on
    /// the upstairs coordinates.
    pub fn dilate_flat(&self, lambda: f64, p: &Point) -> Point {
        Point {
            s: p.s.iter().map(|v| lambda * v).collect(),
            radial: lambda.sqrt() * p.radial,
            angle: p.angle,
        }
    }

    /// The pushed forward dilation (s, r, theta) -> (lambda s, lambda r, theta).
    pub fn dilate_cone(&self, lambda: f64, p: &Point) -> Point {
        Point {
            s: p.s.iter().map(|v| lambda * v).collect(),
            radial: lambda * p.radial,
            angle: p.angle,
        }
    }

    /// Geodesic distance downstairs: flat distance in s combined with the
    /// cone distance of the (r, theta) factors.
    pub fn cone_distance(&self, a: &Point, b: &Point) -> f64 {
        let flat2: f64 = a
            .s
            .iter()
            .zip(&b.s)
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        let mut dtheta = (a.angle - b.angle).rem_euclid(2.0 * PI);
        if dtheta > PI {
            dtheta = 2.0 * PI - dtheta;
        }
        let developed = self.beta * dtheta;
        let cross2 = if developed < PI {
            let c = a.radial * a.radial + b.radial * b.radial
                - 2.0 * a.radial * b.radial * developed.cos();
            c.max(0.0)
        } else {
            let t = a.radial + b.radial;
            t * t
        };
        (flat2 + cross2).sqrt()
    }

    /// Distance upstairs, defined through the squaring map.
    pub fn gprime_distance(&self, a: &Point, b: &Point) -> f64 {
        self.cone_distance(&self.pi2_pushforward(a), &self.pi2_pushforward(b))
    }
}
