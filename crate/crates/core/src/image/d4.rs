/// The eight symmetries of the square acting on pixel grids.
///
/// `FlipHRotK` rotates clockwise by K degrees first and then mirrors
/// left-right. The discriminant doubles as the on-disk code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum D4Transform {
    Identity = 0,
    Rot90 = 1,
    Rot180 = 2,
    Rot270 = 3,
    FlipH = 4,
    FlipHRot90 = 5,
    FlipHRot180 = 6,
    FlipHRot270 = 7,
}

impl D4Transform {
    pub const ALL: [D4Transform; 8] = [
        D4Transform::Identity,
        D4Transform::Rot90,
        D4Transform::Rot180,
        D4Transform::Rot270,
        D4Transform::FlipH,
        D4Transform::FlipHRot90,
        D4Transform::FlipHRot180,
        D4Transform::FlipHRot270,
    ];

    /// The four elements that keep a non-square raster's shape.
    pub const SHAPE_PRESERVING: [D4Transform; 4] = [
        D4Transform::Identity,
        D4Transform::Rot180,
        D4Transform::FlipH,
        D4Transform::FlipHRot180,
    ];

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    fn from_parts(flip: bool, quarter_turns: u8) -> Self {
        Self::ALL[(u8::from(flip) * 4 + quarter_turns % 4) as usize]
    }

    pub fn is_flipped(self) -> bool {
        self.code() >= 4
    }

    /// Clockwise quarter turns applied before the optional flip.
    pub fn quarter_turns(self) -> u8 {
        self.code() % 4
    }

    pub fn swaps_axes(self) -> bool {
        self.quarter_turns() % 2 == 1
    }

    pub fn output_dimensions(self, width: usize, height: usize) -> (usize, usize) {
        if self.swaps_axes() {
            (height, width)
        } else {
            (width, height)
        }
    }

    /// Where source pixel `(x, y)` of a `width`×`height` raster lands.
    #[inline]
    pub fn map_point(self, x: usize, y: usize, width: usize, height: usize) -> (usize, usize) {
        let (mut px, mut py, mut w, mut h) = (x, y, width, height);
        for _ in 0..self.quarter_turns() {
            (px, py) = (h - 1 - py, px);
            (w, h) = (h, w);
        }
        if self.is_flipped() {
            px = w - 1 - px;
        }
        (px, py)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: D4Transform) -> D4Transform {
        let (fa, ka) = (self.is_flipped(), self.quarter_turns());
        let (fb, kb) = (other.is_flipped(), other.quarter_turns());
        if fb {
            // r^k f = f r^-k
            Self::from_parts(!fa, (kb + 4 - ka) % 4)
        } else {
            Self::from_parts(fa, (ka + kb) % 4)
        }
    }

    pub fn inverse(self) -> D4Transform {
        if self.is_flipped() {
            self
        } else {
            Self::from_parts(false, (4 - self.quarter_turns()) % 4)
        }
    }
}
