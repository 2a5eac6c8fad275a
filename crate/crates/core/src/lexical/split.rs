/// Break an identifier into lowercase terms at `_`, camelCase, acronym and
/// letter/digit boundaries. `HTTPServer2` gives `["http", "server", "2"]`.
pub fn split_identifier(ident: &str) -> Vec<String> {
    let mut terms = Vec::new();
    for part in ident.split(|c: char| !c.is_alphanumeric()) {
        split_part(part, &mut terms);
    }
    terms
}

fn split_part(part: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = part.chars().collect();
    let mut start = 0;
    for i in 1..chars.len() {
        let (prev, cur) = (chars[i - 1], chars[i]);
        let next = chars.get(i + 1).copied();
        let boundary = (prev.is_lowercase() && cur.is_uppercase())
            || (prev.is_alphabetic() != cur.is_alphabetic())
            // end of an acronym run: `HTTPServer` splits before `S`
            || (prev.is_uppercase() && cur.is_uppercase() && next.is_some_and(char::is_lowercase));
        if boundary {
            push_term(&chars[start..i], out);
            start = i;
        }
    }
    push_term(&chars[start..], out);
}

fn push_term(chars: &[char], out: &mut Vec<String>) {
    if !chars.is_empty() {
        out.push(chars.iter().collect::<String>().to_lowercase());
    }
}

/// Terms of free text (comments): words split like identifiers, numbers dropped.
pub fn text_terms(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .filter(|w| !w.is_empty())
        .flat_map(split_identifier)
        .filter(|t| !is_number(t))
}

pub fn is_number(term: &str) -> bool {
    !term.is_empty() && term.chars().all(|c| c.is_ascii_digit())
}
