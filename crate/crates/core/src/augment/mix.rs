use super::{AugmentError, BBox};
use crate::image::{FloatImage, GrayImage, Image};
use crate::stego_sim::StegoPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PixelKind {
    Integer8,
    Float32,
}

/// An augmented image: 8-bit for swap-based methods, float for MixUp.
#[derive(Debug, Clone, PartialEq)]
pub enum Raster {
    Gray(GrayImage),
    Float(FloatImage),
}

impl Raster {
    pub fn kind(&self) -> PixelKind {
        match self {
            Raster::Gray(_) => PixelKind::Integer8,
            Raster::Float(_) => PixelKind::Float32,
        }
    }

    pub fn dimensions(&self) -> (usize, usize) {
        match self {
            Raster::Gray(img) => img.dimensions(),
            Raster::Float(img) => img.dimensions(),
        }
    }

    pub fn as_gray(&self) -> Option<&GrayImage> {
        match self {
            Raster::Gray(img) => Some(img),
            Raster::Float(_) => None,
        }
    }

    pub fn as_float(&self) -> Option<&FloatImage> {
        match self {
            Raster::Float(img) => Some(img),
            Raster::Gray(_) => None,
        }
    }

    /// Lossless promotion to float pixels.
    pub fn to_float(&self) -> Raster {
        match self {
            Raster::Gray(img) => Raster::Float(img.to_float()),
            Raster::Float(_) => self.clone(),
        }
    }
}

/// Result of mixing one cover/stego pair.
///
/// `image_cs` holds the cover with the stego patch pasted in, `image_sc` the
/// stego with the cover patch pasted in. The labels always sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedPair {
    image_cs: Raster,
    image_sc: Raster,
    label_cs: f64,
    bbox: BBox,
    lambda: f64,
    modified_in_box: usize,
    modified_total: usize,
}

impl MixedPair {
    pub fn image_cs(&self) -> &Raster {
        &self.image_cs
    }

    pub fn image_sc(&self) -> &Raster {
        &self.image_sc
    }

    pub fn label_cs(&self) -> f64 {
        self.label_cs
    }

    pub fn label_sc(&self) -> f64 {
        1.0 - self.label_cs
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    /// Swap ratio for BitMix, area fraction for CutMix, the interpolation
    /// weight for MixUp.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `(modified pixels inside the box, modified pixels overall)`; only
    /// meaningful for swap-based methods.
    pub fn lambda_ratio(&self) -> (usize, usize) {
        (self.modified_in_box, self.modified_total)
    }

    pub fn pixel_kind(&self) -> PixelKind {
        self.image_cs.kind()
    }

    pub fn into_images(self) -> (Raster, Raster) {
        (self.image_cs, self.image_sc)
    }
}

/// Exchanges the box region between `a` and `b`:
/// returns `(M⊙b + (1−M)⊙a, M⊙a + (1−M)⊙b)`.
pub fn swap_patch<T: Copy>(a: &Image<T>, b: &Image<T>, bbox: BBox) -> (Image<T>, Image<T>) {
    let mut out_a = a.clone();
    let mut out_b = b.clone();
    let w = a.width();
    for y in bbox.y..bbox.y + bbox.height {
        let range = y * w + bbox.x..y * w + bbox.x + bbox.width;
        out_a.pixels_mut()[range.clone()].swap_with_slice(&mut out_b.pixels_mut()[range]);
    }
    (out_a, out_b)
}

/// Number of modified pixels of `pair` that fall inside `bbox`.
pub fn modified_in_box(pair: &StegoPair, bbox: BBox) -> Result<usize, AugmentError> {
    let (w, h) = pair.dimensions();
    bbox.check_fits(w, h)?;
    let (cover, stego) = (pair.cover(), pair.stego());
    let mut count = 0;
    for y in bbox.y..bbox.y + bbox.height {
        let c = &cover.row(y)[bbox.x..bbox.x + bbox.width];
        let s = &stego.row(y)[bbox.x..bbox.x + bbox.width];
        count += c.iter().zip(s).filter(|(a, b)| a != b).count();
    }
    Ok(count)
}

/// Ratio of modified pixels inside the box to all modified pixels, as an
/// exact `(numerator, denominator)` pair.
pub fn swap_ratio(pair: &StegoPair, bbox: BBox) -> Result<(usize, usize), AugmentError> {
    let total = pair.modified();
    if total == 0 {
        return Err(AugmentError::ZeroDenominator);
    }
    Ok((modified_in_box(pair, bbox)?, total))
}

fn swapped(pair: &StegoPair, bbox: BBox) -> (Raster, Raster) {
    let (cs, sc) = swap_patch(pair.cover(), pair.stego(), bbox);
    (Raster::Gray(cs), Raster::Gray(sc))
}

/// Swaps the box between cover and stego and labels the results by the
/// share of modified pixels that moved: `y_cs = λ`, `y_sc = 1 − λ`.
pub fn bitmix_pair(pair: &StegoPair, bbox: BBox) -> Result<MixedPair, AugmentError> {
    let (inside, total) = swap_ratio(pair, bbox)?;
    let lambda = inside as f64 / total as f64;
    let (image_cs, image_sc) = swapped(pair, bbox);
    Ok(MixedPair {
        image_cs,
        image_sc,
        label_cs: lambda,
        bbox,
        lambda,
        modified_in_box: inside,
        modified_total: total,
    })
}

/// Area-proportional labels: `(r_w·r_h / (W·H), 1 − that)`.
pub fn cutmix_labels(bbox: BBox, width: usize, height: usize) -> Result<(f64, f64), AugmentError> {
    bbox.check_fits(width, height)?;
    let fraction = bbox.area_fraction(width, height);
    Ok((fraction, 1.0 - fraction))
}

/// Same images as [`bitmix_pair`], labelled by box area instead.
pub fn cutmix_pair(pair: &StegoPair, bbox: BBox) -> Result<MixedPair, AugmentError> {
    let (w, h) = pair.dimensions();
    let (label_cs, _) = cutmix_labels(bbox, w, h)?;
    let (inside, total) = swap_ratio(pair, bbox)?;
    let (image_cs, image_sc) = swapped(pair, bbox);
    Ok(MixedPair {
        image_cs,
        image_sc,
        label_cs,
        bbox,
        lambda: label_cs,
        modified_in_box: inside,
        modified_total: total,
    })
}

/// Convex combination `λ·S + (1−λ)·C` (and its mirror), kept in float.
pub fn mixup_pair(pair: &StegoPair, coefficient: f64) -> Result<MixedPair, AugmentError> {
    if !(0.0..=1.0).contains(&coefficient) {
        return Err(AugmentError::InvalidCoefficient(coefficient));
    }
    let (cover, stego) = (pair.cover(), pair.stego());
    let (w, h) = pair.dimensions();
    let blend = |weight_stego: f64| -> FloatImage {
        let pixels = cover
            .pixels()
            .iter()
            .zip(stego.pixels())
            .map(|(&c, &s)| (weight_stego * s as f64 + (1.0 - weight_stego) * c as f64) as f32)
            .collect();
        Image::new(w, h, pixels).expect("dimensions come from a valid pair")
    };
    Ok(MixedPair {
        image_cs: Raster::Float(blend(coefficient)),
        image_sc: Raster::Float(blend(1.0 - coefficient)),
        label_cs: coefficient,
        bbox: BBox::default(),
        lambda: coefficient,
        modified_in_box: 0,
        modified_total: pair.modified(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{diff_count, D4Transform};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pair(rng: &mut impl Rng, w: usize, h: usize, rate: f64) -> StegoPair {
        let cover = GrayImage::from_fn(w, h, |_, _| rng.gen_range(1..255)).unwrap();
        loop {
            let stego = cover.map(|v| {
                if rng.gen_bool(rate) {
                    if rng.gen() {
                        v + 1
                    } else {
                        v - 1
                    }
                } else {
                    v
                }
            });
            if let Ok(pair) = StegoPair::new(cover.clone(), stego) {
                return pair;
            }
        }
    }

    fn random_box(rng: &mut impl Rng, w: usize, h: usize) -> BBox {
        let bw = rng.gen_range(0..=w);
        let bh = rng.gen_range(0..=h);
        BBox::new(rng.gen_range(0..=w - bw), rng.gen_range(0..=h - bh), bw, bh)
    }

    #[test]
    fn empty_box_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pair = random_pair(&mut rng, 6, 5, 0.3);
        let mixed = bitmix_pair(&pair, BBox::new(2, 3, 0, 0)).unwrap();
        assert_eq!(mixed.lambda(), 0.0);
        assert_eq!((mixed.label_cs(), mixed.label_sc()), (0.0, 1.0));
        assert_eq!(mixed.image_cs().as_gray().unwrap(), pair.cover());
        assert_eq!(mixed.image_sc().as_gray().unwrap(), pair.stego());
        assert_eq!(mixed.pixel_kind(), PixelKind::Integer8);
    }

    #[test]
    fn full_box_swaps_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pair = random_pair(&mut rng, 6, 5, 0.3);
        let mixed = bitmix_pair(&pair, BBox::new(0, 0, 6, 5)).unwrap();
        assert_eq!(mixed.lambda(), 1.0);
        assert_eq!(mixed.image_cs().as_gray().unwrap(), pair.stego());
        assert_eq!(mixed.image_sc().as_gray().unwrap(), pair.cover());
    }

    #[test]
    fn out_of_bounds_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pair = random_pair(&mut rng, 4, 4, 0.5);
        let bad = BBox::new(3, 0, 2, 1);
        assert!(matches!(
            bitmix_pair(&pair, bad),
            Err(AugmentError::BoxOutOfBounds { .. })
        ));
        assert!(cutmix_labels(bad, 4, 4).is_err());
    }

    #[test]
    fn lambda_matches_nested_loop_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let pair = random_pair(&mut rng, 8, 8, 0.3);
            let bbox = random_box(&mut rng, 8, 8);
            let (mut inside, mut total) = (0usize, 0usize);
            for y in 0..8 {
                for x in 0..8 {
                    if pair.cover().get(x, y) != pair.stego().get(x, y) {
                        total += 1;
                        if x >= bbox.x
                            && x < bbox.x + bbox.width
                            && y >= bbox.y
                            && y < bbox.y + bbox.height
                        {
                            inside += 1;
                        }
                    }
                }
            }
            let mixed = bitmix_pair(&pair, bbox).unwrap();
            assert_eq!(mixed.lambda_ratio(), (inside, total));
            assert_eq!(mixed.lambda(), inside as f64 / total as f64);
        }
    }

    #[test]
    fn cutmix_reference_labels() {
        assert_eq!(
            cutmix_labels(BBox::new(64, 10, 128, 128), 256, 256).unwrap(),
            (0.25, 0.75)
        );
        assert_eq!(
            cutmix_labels(BBox::default(), 256, 256).unwrap(),
            (0.0, 1.0)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let (w, h) = (rng.gen_range(1..64), rng.gen_range(1..64));
            let b = random_box(&mut rng, w, h);
            let (cs, sc) = cutmix_labels(b, w, h).unwrap();
            assert_eq!(cs, (b.width * b.height) as f64 / (w * h) as f64);
            assert_eq!(cs + sc, 1.0);
        }
    }

    #[test]
    fn cutmix_pair_shares_images_with_bitmix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pair = random_pair(&mut rng, 16, 16, 0.2);
        let b = BBox::new(2, 3, 8, 5);
        let bit = bitmix_pair(&pair, b).unwrap();
        let cut = cutmix_pair(&pair, b).unwrap();
        assert_eq!(bit.image_cs(), cut.image_cs());
        assert_eq!(bit.image_sc(), cut.image_sc());
        assert_eq!(cut.label_cs(), 40.0 / 256.0);
    }

    #[test]
    fn mixup_edge_coefficients() {
        let cover = GrayImage::new(2, 2, vec![10, 20, 30, 40]).unwrap();
        let stego = GrayImage::new(2, 2, vec![11, 20, 29, 40]).unwrap();
        let pair = StegoPair::new(cover.clone(), stego.clone()).unwrap();

        let zero = mixup_pair(&pair, 0.0).unwrap();
        assert_eq!(zero.image_cs().as_float().unwrap(), &cover.to_float());
        assert_eq!(zero.image_sc().as_float().unwrap(), &stego.to_float());
        assert_eq!((zero.label_cs(), zero.label_sc()), (0.0, 1.0));
        assert_eq!(zero.pixel_kind(), PixelKind::Float32);

        let half = mixup_pair(&pair, 0.5).unwrap();
        assert_eq!(half.image_cs(), half.image_sc());

        // hand-computed: 0.25*S + 0.75*C and 0.25*C + 0.75*S
        let quarter = mixup_pair(&pair, 0.25).unwrap();
        assert_eq!(
            quarter.image_cs().as_float().unwrap().pixels(),
            &[10.25, 20.0, 29.75, 40.0]
        );
        assert_eq!(
            quarter.image_sc().as_float().unwrap().pixels(),
            &[10.75, 20.0, 29.25, 40.0]
        );
        assert_eq!((quarter.label_cs(), quarter.label_sc()), (0.25, 0.75));
        assert!(mixup_pair(&pair, 1.5).is_err());
    }

    #[test]
    fn d4_equivariance_of_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let (w, h) = (rng.gen_range(2..20), rng.gen_range(2..20));
            let pair = random_pair(&mut rng, w, h, 0.2);
            let b = random_box(&mut rng, w, h);
            let base = bitmix_pair(&pair, b).unwrap().lambda_ratio();
            for t in D4Transform::ALL {
                let moved = pair.apply_d4(t);
                let tb = b.transform(t, w, h);
                assert_eq!(bitmix_pair(&moved, tb).unwrap().lambda_ratio(), base);
            }
        }
    }

    proptest! {
        #[test]
        fn swap_invariants(seed in any::<u64>(), w in 1usize..24, h in 1usize..24) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pair = random_pair(&mut rng, w, h, 0.3);
            let b = random_box(&mut rng, w, h);
            let mixed = bitmix_pair(&pair, b).unwrap();
            let cs = mixed.image_cs().as_gray().unwrap();
            let sc = mixed.image_sc().as_gray().unwrap();

            // involution
            let (c2, s2) = swap_patch(cs, sc, b);
            prop_assert_eq!(&c2, pair.cover());
            prop_assert_eq!(&s2, pair.stego());

            for y in 0..h {
                for x in 0..w {
                    let (c, s) = (pair.cover().get(x, y), pair.stego().get(x, y));
                    let mut before = [c, s];
                    let mut after = [cs.get(x, y), sc.get(x, y)];
                    before.sort();
                    after.sort();
                    prop_assert_eq!(before, after);
                    if b.contains(x, y) {
                        prop_assert_eq!(cs.get(x, y), s);
                    } else {
                        prop_assert_eq!(cs.get(x, y), c);
                    }
                }
            }

            // label simplex and decomposition of the modified pixels
            prop_assert!((0.0..=1.0).contains(&mixed.label_cs()));
            prop_assert_eq!(mixed.label_cs() + mixed.label_sc(), 1.0);
            prop_assert_eq!(mixed.lambda(), mixed.label_cs());
            let moved = diff_count(pair.cover(), cs).unwrap();
            let kept = diff_count(pair.cover(), sc).unwrap();
            prop_assert_eq!(moved + kept, pair.modified());
            prop_assert_eq!(moved, mixed.lambda_ratio().0);
            prop_assert_eq!(moved as f64, (mixed.lambda() * pair.modified() as f64).round());
        }
    }
}
