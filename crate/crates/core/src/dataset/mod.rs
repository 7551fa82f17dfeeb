//! Image datasets and continual-learning task streams.

mod idx;
mod permutation;

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub use idx::{encode_idx, load_idx, parse_idx, IdxTensor, IMAGE_MAGIC, LABEL_MAGIC};
pub use permutation::{apply_permutation, gen_permutation, PixelPermutation};

use crate::error::{Error, IdxError, Result};
use crate::rng::{derive_seed, Purpose};

pub const SIDE: usize = 28;
pub const PIXELS: usize = SIDE * SIDE;

/// A 28×28 row-major intensity image.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrayImage(pub [u8; PIXELS]);

impl GrayImage {
    pub fn zeros() -> Self {
        GrayImage([0; PIXELS])
    }

    pub fn from_slice(pixels: &[u8]) -> Option<Self> {
        <[u8; PIXELS]>::try_from(pixels).ok().map(GrayImage)
    }

    pub fn pixels(&self) -> &[u8; PIXELS] {
        &self.0
    }

    pub fn transposed(&self) -> Self {
        let mut out = [0u8; PIXELS];
        for r in 0..SIDE {
            for c in 0..SIDE {
                out[c * SIDE + r] = self.0[r * SIDE + c];
            }
        }
        GrayImage(out)
    }

    pub fn intensity_sum(&self) -> u64 {
        self.0.iter().map(|&v| u64::from(v)).sum()
    }
}

impl fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrayImage(sum={})", self.intensity_sum())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDataset {
    images: Vec<GrayImage>,
    labels: Vec<u8>,
    class_count: usize,
}

impl LabeledDataset {
    pub fn new(images: Vec<GrayImage>, labels: Vec<u8>, class_count: usize) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::InsufficientData(format!(
                "{} images but {} labels",
                images.len(),
                labels.len()
            )));
        }
        if class_count == 0 {
            return Err(Error::Config("class_count must be positive".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| usize::from(l) >= class_count) {
            return Err(Error::LabelOutOfRange {
                label: bad.into(),
                classes: class_count,
            });
        }
        Ok(LabeledDataset {
            images,
            labels,
            class_count,
        })
    }

    /// Builds a dataset from an image tensor `[n, 28, 28]` and a label tensor `[n]`.
    pub fn from_idx(images: &IdxTensor, labels: &IdxTensor, class_count: usize, images_path: &Path) -> Result<Self> {
        let mismatch = |detail: String| IdxError::DimensionMismatch {
            path: images_path.to_path_buf(),
            detail,
        };
        if images.magic != IMAGE_MAGIC || images.dims[1..] != [SIDE, SIDE] {
            return Err(mismatch(format!("expected [n, 28, 28] images, got {:?}", images.dims)).into());
        }
        if labels.magic != LABEL_MAGIC || labels.len() != images.len() {
            return Err(mismatch(format!("{} images but {} labels", images.len(), labels.len())).into());
        }
        let imgs = (0..images.len())
            .map(|i| GrayImage::from_slice(images.item(i)).expect("item size checked"))
            .collect();
        Self::new(imgs, labels.data.clone(), class_count)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn images(&self) -> &[GrayImage] {
        &self.images
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> (&GrayImage, usize) {
        (&self.images[i], usize::from(self.labels[i]))
    }

    /// First `n` samples in file order.
    pub fn head(&self, n: usize) -> Self {
        LabeledDataset {
            images: self.images[..n].to_vec(),
            labels: self.labels[..n].to_vec(),
            class_count: self.class_count,
        }
    }

    pub fn class_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.class_count];
        for &l in &self.labels {
            h[usize::from(l)] += 1;
        }
        h
    }
}

/// A dataset seen through an optional pixel permutation.
#[derive(Debug, Clone)]
pub struct TaskData {
    base: Arc<LabeledDataset>,
    permutation: Option<Arc<PixelPermutation>>,
}

impl TaskData {
    pub fn new(base: Arc<LabeledDataset>, permutation: Option<Arc<PixelPermutation>>) -> Self {
        TaskData { base, permutation }
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.base.class_count()
    }

    pub fn label(&self, i: usize) -> usize {
        usize::from(self.base.labels[i])
    }

    pub fn image(&self, i: usize) -> GrayImage {
        let img = &self.base.images[i];
        match &self.permutation {
            Some(p) => apply_permutation(img, p),
            None => img.clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (GrayImage, usize)> + '_ {
        (0..self.len()).map(|i| (self.image(i), self.label(i)))
    }

    /// Takes the first `n` samples (or all of them if fewer).
    pub fn truncated(&self, n: usize) -> Self {
        if n >= self.len() {
            return self.clone();
        }
        TaskData {
            base: Arc::new(self.base.head(n)),
            permutation: self.permutation.clone(),
        }
    }

    pub fn materialize(&self) -> LabeledDataset {
        let images = (0..self.len()).map(|i| self.image(i)).collect();
        LabeledDataset {
            images,
            labels: self.base.labels.clone(),
            class_count: self.base.class_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskSource {
    MnistTruncated,
    EmnistLetters,
    PermutedMnist { seed: u64 },
}

impl fmt::Display for TaskSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskSource::MnistTruncated => f.write_str("mnist-truncated"),
            TaskSource::EmnistLetters => f.write_str("emnist-letters"),
            TaskSource::PermutedMnist { seed } => write!(f, "permuted-mnist({seed})"),
        }
    }
}

/// One task of a continual-learning stream.
#[derive(Debug, Clone)]
pub struct TaskSpec {
    /// 1-based task index.
    pub id: usize,
    pub source: TaskSource,
    pub train: TaskData,
    pub test: TaskData,
}

impl TaskSpec {
    pub fn class_count(&self) -> usize {
        self.train.class_count()
    }

    /// Limits the number of training/test samples (reduced-scale runs).
    pub fn limited(&self, train: Option<usize>, test: Option<usize>) -> Self {
        TaskSpec {
            id: self.id,
            source: self.source.clone(),
            train: train.map_or_else(|| self.train.clone(), |n| self.train.truncated(n)),
            test: test.map_or_else(|| self.test.clone(), |n| self.test.truncated(n)),
        }
    }
}

/// Train/test split of a source dataset.
#[derive(Debug, Clone)]
pub struct Split {
    pub train: Arc<LabeledDataset>,
    pub test: Arc<LabeledDataset>,
}

const MNIST_FILES: [[&str; 2]; 4] = [
    ["train-images-idx3-ubyte", "train-images.idx3-ubyte"],
    ["train-labels-idx1-ubyte", "train-labels.idx1-ubyte"],
    ["t10k-images-idx3-ubyte", "t10k-images.idx3-ubyte"],
    ["t10k-labels-idx1-ubyte", "t10k-labels.idx1-ubyte"],
];

const EMNIST_FILES: [[&str; 2]; 4] = [
    [
        "emnist-balanced-train-images-idx3-ubyte",
        "emnist-balanced-train-images.idx3-ubyte",
    ],
    [
        "emnist-balanced-train-labels-idx1-ubyte",
        "emnist-balanced-train-labels.idx1-ubyte",
    ],
    [
        "emnist-balanced-test-images-idx3-ubyte",
        "emnist-balanced-test-images.idx3-ubyte",
    ],
    [
        "emnist-balanced-test-labels-idx1-ubyte",
        "emnist-balanced-test-labels.idx1-ubyte",
    ],
];

/// Locates an IDX file by its conventional names, with or without `.gz`.
pub fn find_idx_file(dir: &Path, names: &[&str]) -> Result<PathBuf> {
    for name in names {
        for candidate in [dir.join(name), dir.join(format!("{name}.gz"))] {
            if candidate.is_file() {
                return Ok(candidate);
            }
        }
    }
    Err(IdxError::Io {
        path: dir.join(names[0]),
        source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
    }
    .into())
}

fn load_split(dir: &Path, files: &[[&str; 2]; 4], classes: usize, transpose: bool) -> Result<Split> {
    let paths: Vec<PathBuf> = files
        .iter()
        .map(|names| find_idx_file(dir, names))
        .collect::<Result<_>>()?;
    let read = |img: &Path, lbl: &Path| -> Result<LabeledDataset> {
        let mut ds = LabeledDataset::from_idx(&load_idx(img)?, &load_idx(lbl)?, classes, img)?;
        if transpose {
            ds.images.iter_mut().for_each(|im| *im = im.transposed());
        }
        Ok(ds)
    };
    Ok(Split {
        train: Arc::new(read(&paths[0], &paths[1])?),
        test: Arc::new(read(&paths[2], &paths[3])?),
    })
}

/// Loads the four MNIST files from `dir`.
pub fn load_mnist(dir: &Path) -> Result<Split> {
    load_split(dir, &MNIST_FILES, 10, false)
}

/// Number of classes in the EMNIST Balanced split.
pub const EMNIST_BALANCED_CLASSES: usize = 47;

/// Loads the four EMNIST Balanced files from `dir`.
///
/// EMNIST stores images transposed relative to MNIST; they are transposed
/// back here so letters appear upright.
pub fn load_emnist_balanced(dir: &Path) -> Result<Split> {
    load_split(dir, &EMNIST_FILES, EMNIST_BALANCED_CLASSES, true)
}

/// EMNIST Balanced label of a character class, if the split contains it.
///
/// Balanced merges the case of letters whose upper- and lower-case shapes
/// coincide; the label space is `0-9`, `A-Z`, then `a b d e f g h n q r t`.
pub fn emnist_balanced_label(class: char) -> Option<u8> {
    const LOWER: [char; 11] = ['a', 'b', 'd', 'e', 'f', 'g', 'h', 'n', 'q', 'r', 't'];
    match class {
        '0'..='9' => Some(class as u8 - b'0'),
        'A'..='Z' => Some(10 + (class as u8 - b'A')),
        _ => LOWER.iter().position(|&c| c == class).map(|i| 36 + i as u8),
    }
}

/// Letter classes of the E/MNIST two-task protocol, in relabeling order.
pub const EMNIST_LETTERS: [char; 10] = ['A', 'B', 'D', 'E', 'G', 'H', 'N', 'Q', 'R', 'S'];

/// First `train_count` / `test_count` MNIST samples in file order.
pub fn make_mnist_truncated(mnist: &Split, train_count: usize, test_count: usize) -> Result<TaskSpec> {
    if train_count > mnist.train.len() || test_count > mnist.test.len() {
        return Err(Error::InsufficientData(format!(
            "requested {train_count}/{test_count} train/test samples, source has {}/{}",
            mnist.train.len(),
            mnist.test.len()
        )));
    }
    if train_count == 0 {
        log::warn!("truncated MNIST task has an empty training set");
    }
    Ok(TaskSpec {
        id: 1,
        source: TaskSource::MnistTruncated,
        train: TaskData::new(Arc::new(mnist.train.head(train_count)), None),
        test: TaskData::new(Arc::new(mnist.test.head(test_count)), None),
    })
}

/// Keeps the listed EMNIST Balanced classes and relabels them `0..` in list order.
pub fn make_emnist_letters(emnist: &Split, classes: &[char]) -> Result<TaskSpec> {
    let source_labels: Vec<u8> = classes
        .iter()
        .map(|&c| emnist_balanced_label(c).ok_or_else(|| Error::MissingClass(c.to_string())))
        .collect::<Result<_>>()?;
    let select = |ds: &LabeledDataset| -> Result<LabeledDataset> {
        let mut images = Vec::new();
        let mut labels = Vec::new();
        for (img, &l) in ds.images.iter().zip(&ds.labels) {
            if let Some(k) = source_labels.iter().position(|&s| s == l) {
                images.push(img.clone());
                labels.push(k as u8);
            }
        }
        let out = LabeledDataset::new(images, labels, classes.len())?;
        if let Some(k) = out.class_histogram().iter().position(|&n| n == 0) {
            return Err(Error::MissingClass(classes[k].to_string()));
        }
        Ok(out)
    };
    Ok(TaskSpec {
        id: 1,
        source: TaskSource::EmnistLetters,
        train: TaskData::new(Arc::new(select(&emnist.train)?), None),
        test: TaskData::new(Arc::new(select(&emnist.test)?), None),
    })
}

/// Seed of the permutation used by task `task` (1-based) of a permuted stream.
/// Task 1 is the identity (seed 0).
pub fn permutation_seed(base_seed: u64, task: usize) -> u64 {
    if task <= 1 {
        return 0;
    }
    match derive_seed(base_seed, Purpose::Permutation, task as u64) {
        0 => 1,
        s => s,
    }
}

/// Permuted-MNIST stream: task 1 unpermuted, tasks 2..=n each with its own
/// seeded permutation applied to both train and test sets.
pub fn make_permuted_stream(mnist: &Split, n_tasks: usize, base_seed: u64) -> Result<Vec<TaskSpec>> {
    if n_tasks == 0 {
        return Err(Error::Config("n_tasks must be at least 1".into()));
    }
    Ok((1..=n_tasks)
        .map(|id| {
            let seed = permutation_seed(base_seed, id);
            let perm = (seed != 0).then(|| Arc::new(gen_permutation(seed)));
            TaskSpec {
                id,
                source: TaskSource::PermutedMnist { seed },
                train: TaskData::new(mnist.train.clone(), perm.clone()),
                test: TaskData::new(mnist.test.clone(), perm),
            }
        })
        .collect())
}

/// Renumbers tasks 1..=n in the given order.
pub fn sequence(tasks: Vec<TaskSpec>) -> Vec<TaskSpec> {
    tasks
        .into_iter()
        .enumerate()
        .map(|(i, t)| TaskSpec { id: i + 1, ..t })
        .collect()
}
