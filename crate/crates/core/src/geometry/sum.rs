use num_complex::Complex64;

/// Neumaier-compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn step((sum, c): (f64, f64), x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        c + ((sum - t) + x)
    } else {
        c + ((x - t) + sum)
    };
    (t, c)
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        self.re = step(self.re, z.re);
        self.im = step(self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

pub fn compensated_total<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> Complex64 {
    let mut s = CompensatedSum::default();
    for v in values {
        s.add(*v);
    }
    s.value()
}
