use std::cmp::Ordering;

/// Natural ordering for file names: digit runs compare by numeric value,
/// everything else case-insensitively. Remaining ties fall back to a plain
/// byte comparison so the order is total.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    natural_key_cmp(a.as_bytes(), b.as_bytes()).then_with(|| a.cmp(b))
}

fn digit_run(s: &[u8], start: usize) -> usize {
    s[start..].iter().take_while(|c| c.is_ascii_digit()).count()
}

fn natural_key_cmp(a: &[u8], b: &[u8]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].is_ascii_digit() && b[j].is_ascii_digit() {
            let (la, lb) = (digit_run(a, i), digit_run(b, j));
            let na = trim_zeros(&a[i..i + la]);
            let nb = trim_zeros(&b[j..j + lb]);
            let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
            if ord != Ordering::Equal {
                return ord;
            }
            i += la;
            j += lb;
        } else {
            let ord = a[i].to_ascii_lowercase().cmp(&b[j].to_ascii_lowercase());
            if ord != Ordering::Equal {
                return ord;
            }
            i += 1;
            j += 1;
        }
    }
    (a.len() - i).cmp(&(b.len() - j))
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let nonzero = digits.iter().position(|&c| c != b'0').unwrap_or(digits.len());
    &digits[nonzero..]
}
