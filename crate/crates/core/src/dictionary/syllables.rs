fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable estimate.
///
/// Counts maximal runs of `aeiouy`, drops a trailing silent `e` (but keeps
/// the consonant + `le` ending as in "ta-ble"), and never returns less than 1
/// for a word containing a letter. Words without letters count 0.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if letters.is_empty() {
        return 0;
    }
    let mut groups = 0;
    let mut in_group = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = letters.len();
    let lone_final_e = n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2]);
    let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
    if lone_final_e && !consonant_le && groups > 1 {
        groups -= 1;
    }
    groups.max(1)
}
