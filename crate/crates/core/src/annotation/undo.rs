use std::collections::VecDeque;

/// Default bound on undoable entries.
pub const DEFAULT_UNDO_DEPTH: usize = 256;

/// Linear undo history with a redo branch. The oldest entry is dropped once
/// `max_depth` is exceeded; recording a new entry clears the redo branch.
#[derive(Debug, Clone)]
pub struct UndoStack<T> {
    done: VecDeque<T>,
    undone: Vec<T>,
    max_depth: usize,
}

impl<T> Default for UndoStack<T> {
    fn default() -> Self {
        Self::new(DEFAULT_UNDO_DEPTH)
    }
}

impl<T> UndoStack<T> {
    pub fn new(max_depth: usize) -> Self {
        Self {
            done: VecDeque::new(),
            undone: Vec::new(),
            max_depth,
        }
    }

    pub fn record(&mut self, entry: T) {
        self.undone.clear();
        if self.max_depth == 0 {
            return;
        }
        if self.done.len() == self.max_depth {
            self.done.pop_front();
        }
        self.done.push_back(entry);
    }

    /// Move the newest entry to the redo branch and return it.
    pub fn undo(&mut self) -> Option<&T> {
        let entry = self.done.pop_back()?;
        self.undone.push(entry);
        self.undone.last()
    }

    /// Move the newest undone entry back and return it.
    pub fn redo(&mut self) -> Option<&T> {
        let entry = self.undone.pop()?;
        self.done.push_back(entry);
        self.done.back()
    }

    pub fn undo_len(&self) -> usize {
        self.done.len()
    }

    pub fn redo_len(&self) -> usize {
        self.undone.len()
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn clear(&mut self) {
        self.done.clear();
        self.undone.clear();
    }
}
