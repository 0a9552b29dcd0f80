//! Treebank-style word tokenization, following the rule cascade of NLTK's
//! `NLTKWordTokenizer`, applied per sentence.

use std::sync::OnceLock;

use fancy_regex::Regex;

struct Rule {
    pattern: Regex,
    replacement: &'static str,
}

impl Rule {
    fn apply(&self, text: &str) -> String {
        self.pattern.replace_all(text, self.replacement).into_owned()
    }
}

struct Rules {
    starting_quotes: Vec<Rule>,
    punctuation: Vec<Rule>,
    parens: Rule,
    double_dashes: Rule,
    ending_quotes: Vec<Rule>,
    contractions: Vec<Rule>,
}

fn rule(pattern: &str, replacement: &'static str) -> Rule {
    Rule {
        pattern: Regex::new(pattern).unwrap_or_else(|e| panic!("bad tokenizer pattern {pattern}: {e}")),
        replacement,
    }
}

fn rules() -> &'static Rules {
    static RULES: OnceLock<Rules> = OnceLock::new();
    RULES.get_or_init(|| {
        // `$` in Python also matches before a final newline
        const END: &str = r"(?=\n?\z)";
        let contraction = |p: &str| rule(p, " ${1} ${2} ");
        Rules {
            starting_quotes: vec![
                rule(r"([«“‘„]|[`]+)", " ${1} "),
                rule(r#"^""#, "``"),
                rule(r"(``)", " ${1} "),
                rule(r#"([ (\[{<])("|'{2})"#, "${1} `` "),
                rule(r"(?i)(?<!\w)(')(?!(?:re|ve|ll|m|t|s|d|n)\b)(?=\w)", "${1} "),
            ],
            punctuation: vec![
                rule(&format!(r#"([^.])(\.)([\])}}>"'»”’ ]*)\s*{END}"#), "${1} ${2} ${3} "),
                rule(r"([:,])([^\d])", " ${1} ${2}"),
                rule(&format!(r"([:,]){END}"), " ${1} "),
                rule(r"\.{2,}", " ${0} "),
                rule(r"[;@#$%&]", " ${0} "),
                rule(r"[\u{2012}-\u{2015}]", " ${0} "),
                rule(&format!(r#"([^.])(\.)([\])}}>"']*)\s*{END}"#), "${1} ${2}${3} "),
                rule(r"[?!]", " ${0} "),
                rule(r"([^'])' ", "${1} ' "),
                rule(r"[*]", " ${0} "),
            ],
            parens: rule(r"[\]\[(){}<>]", " ${0} "),
            double_dashes: rule(r"--", " -- "),
            ending_quotes: vec![
                rule(r"([»”’])", " ${1} "),
                rule(r"''", " '' "),
                rule(r#"""#, " '' "),
                rule(r"\s+", " "),
                rule(r"([^' ])('[sS]|'[mM]|'[dD]|') ", "${1} ${2} "),
                rule(r"([^' ])('ll|'LL|'re|'RE|'ve|'VE|n't|N'T) ", "${1} ${2} "),
            ],
            contractions: vec![
                contraction(r"(?i)\b(can)(not)\b"),
                contraction(r"(?i)\b(d)('ye)\b"),
                contraction(r"(?i)\b(gim)(me)\b"),
                contraction(r"(?i)\b(gon)(na)\b"),
                contraction(r"(?i)\b(got)(ta)\b"),
                contraction(r"(?i)\b(lem)(me)\b"),
                contraction(r"(?i)\b(more)('n)\b"),
                contraction(r"(?i)\b(wan)(na)(?=\s)"),
                contraction(r"(?i) ('t)(is)\b"),
                contraction(r"(?i) ('t)(was)\b"),
            ],
        }
    })
}

/// Tokenizes text that is already a single sentence.
pub fn tokenize_sentence(sentence: &str) -> Vec<String> {
    let r = rules();
    let mut text = sentence.to_string();
    for rule in &r.starting_quotes {
        text = rule.apply(&text);
    }
    for rule in &r.punctuation {
        text = rule.apply(&text);
    }
    text = r.parens.apply(&text);
    text = r.double_dashes.apply(&text);
    text = format!(" {text} ");
    for rule in &r.ending_quotes {
        text = rule.apply(&text);
    }
    for rule in &r.contractions {
        text = rule.apply(&text);
    }
    text.split_whitespace().map(str::to_string).collect()
}

/// Words that end in a period without ending a sentence.
const ABBREVIATIONS: &[&str] = &[
    "avg", "vs", "etc", "e.g", "i.e", "mr", "mrs", "ms", "dr", "prof", "fig", "approx", "st", "jr", "sr", "inc", "ltd",
    "no", "num",
];

fn ends_sentence(word: &str) -> bool {
    let core = word.trim_end_matches(['"', '\'', ')', ']', '}', '’', '”']);
    let Some(stem) = core.strip_suffix(['.', '!', '?']) else {
        return false;
    };
    if core.ends_with('.') {
        let stem = stem.trim_start_matches(['"', '\'', '(', '[', '‘', '“']).to_lowercase();
        if stem.chars().count() == 1 && stem.chars().all(char::is_alphabetic) {
            return false;
        }
        if ABBREVIATIONS.contains(&stem.as_str()) {
            return false;
        }
    }
    true
}

fn starts_sentence(word: &str) -> bool {
    word.chars()
        .find(|c| !matches!(c, '"' | '\'' | '(' | '[' | '‘' | '“' | '`'))
        .is_some_and(|c| c.is_uppercase() || c.is_ascii_digit())
}

/// Splits `text` into sentences at terminal punctuation followed by
/// whitespace and a capitalized word, skipping common abbreviations and
/// single-letter initials.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let mut sentences = Vec::new();
    let mut start = 0;
    let words: Vec<(usize, &str)> = text
        .split_whitespace()
        .map(|w| (w.as_ptr() as usize - text.as_ptr() as usize, w))
        .collect();
    for pair in words.windows(2) {
        let (pos, word) = pair[0];
        let (next_pos, next) = pair[1];
        if ends_sentence(word) && starts_sentence(next) {
            let s = text[start..pos + word.len()].trim();
            if !s.is_empty() {
                sentences.push(s);
            }
            start = next_pos;
        }
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        sentences.push(tail);
    }
    sentences
}

/// Word tokens of `text`, sentence by sentence.
pub fn tokenize(text: &str) -> Vec<String> {
    split_sentences(text).into_iter().flat_map(tokenize_sentence).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_punctuation_and_contractions() {
        assert_eq!(tokenize("A line plot."), ["A", "line", "plot", "."]);
        assert_eq!(tokenize("Don't stop"), ["Do", "n't", "stop"]);
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn sentence_boundaries() {
        assert_eq!(
            split_sentences("A plot titled 'avg. Monthly hours'. X is plotted. 2 lines."),
            ["A plot titled 'avg. Monthly hours'.", "X is plotted.", "2 lines."]
        );
        assert_eq!(
            tokenize("Ends here. Next one."),
            ["Ends", "here", ".", "Next", "one", "."]
        );
    }
}
