/// Binary per-vertex paint mask for one frame.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelLayer {
    mask: Vec<bool>,
}

impl LabelLayer {
    /// All-unlabelled layer.
    pub fn new(vertex_count: usize) -> Self {
        Self {
            mask: vec![false; vertex_count],
        }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    /// Out-of-range vertices read as unlabelled.
    pub fn get(&self, vertex: usize) -> bool {
        self.mask.get(vertex).copied().unwrap_or(false)
    }

    /// Panics if `vertex` is out of range.
    pub fn set(&mut self, vertex: usize, labelled: bool) {
        self.mask[vertex] = labelled;
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.mask
    }

    /// Number of labelled vertices.
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// True when no vertex is labelled.
    pub fn is_blank(&self) -> bool {
        !self.mask.contains(&true)
    }

    pub fn labelled_vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v as u32)
    }
}
