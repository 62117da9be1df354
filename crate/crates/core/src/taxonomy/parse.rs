//! Taxonomy readers: a four-column TSV fixture format and the Princeton
//! WordNet database layout (`data.noun`, `data.verb`, optional `index.*`).

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Pos, Synset, Taxonomy};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaxonomyFormat {
    /// `id<TAB>pos<TAB>lemma,lemma<TAB>parent,parent`
    Tsv,
    /// A WordNet 3.x `dict/` directory.
    Wndb,
}

impl FromStr for TaxonomyFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(TaxonomyFormat::Tsv),
            "wndb" => Ok(TaxonomyFormat::Wndb),
            other => Err(Error::InvalidArgument(format!("unknown taxonomy format `{other}`"))),
        }
    }
}

pub fn load_taxonomy(source: impl AsRef<Path>, format: TaxonomyFormat) -> Result<Taxonomy> {
    let source = source.as_ref();
    match format {
        TaxonomyFormat::Tsv => {
            let text = std::fs::read_to_string(source).map_err(|e| Error::io(source, e))?;
            parse_tsv(&text, source)
        }
        TaxonomyFormat::Wndb => load_wndb(source),
    }
}

/// Parses the TSV fixture format. `origin` only labels error messages.
pub fn parse_tsv(text: &str, origin: impl AsRef<Path>) -> Result<Taxonomy> {
    let origin = origin.as_ref();
    let mut synsets = Vec::new();
    let mut lines = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(Error::parse(origin, line, format!("expected 3 or 4 tab-separated fields, found {}", fields.len())));
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(Error::parse(origin, line, "empty synset id"));
        }
        let pos = Pos::from_str(fields[1]).map_err(|e| Error::parse(origin, line, e.to_string()))?;
        let lemmas: Vec<String> = split_list(fields[2]);
        if lemmas.is_empty() {
            return Err(Error::parse(origin, line, "synset has no lemmas"));
        }
        if let Some(bad) = lemmas.iter().find(|l| l.chars().any(char::is_whitespace)) {
            return Err(Error::parse(origin, line, format!("lemma `{bad}` contains whitespace")));
        }
        let parents = fields.get(3).map(|f| split_list(f)).unwrap_or_default();
        if lines.insert(id.to_string(), line).is_some() {
            return Err(Error::parse(origin, line, format!("duplicate synset id `{id}`")));
        }
        synsets.push(Synset {
            id: id.to_string(),
            pos,
            lemmas,
            parents,
        });
    }

    let pos_of: HashMap<&str, Pos> = synsets.iter().map(|s| (s.id.as_str(), s.pos)).collect();
    for s in &synsets {
        for p in &s.parents {
            match pos_of.get(p.as_str()) {
                None => return Err(Error::parse(origin, lines[&s.id], format!("unknown parent `{p}`"))),
                Some(&pp) if pp != s.pos => {
                    return Err(Error::parse(origin, lines[&s.id], format!("parent `{p}` has a different part of speech")))
                }
                _ => {}
            }
        }
    }
    Taxonomy::from_synsets(synsets)
}

fn split_list(field: &str) -> Vec<String> {
    field
        .split(',')
        .map(|s| s.trim().to_lowercase())
        .filter(|s| !s.is_empty())
        .collect()
}

fn wndb_id(offset: &str, pos: Pos) -> String {
    format!("{offset}-{}", pos.tag())
}

fn load_wndb(dir: &Path) -> Result<Taxonomy> {
    let mut synsets = Vec::new();
    for (pos, name) in [(Pos::Noun, "noun"), (Pos::Verb, "verb")] {
        let path = dir.join(format!("data.{name}"));
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        for (n, line) in text.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            synsets.push(parse_data_line(line, pos).map_err(|m| Error::parse(&path, n + 1, m))?);
        }
    }

    let mut taxonomy = Taxonomy::from_synsets(synsets)?;

    for (pos, name) in [(Pos::Noun, "noun"), (Pos::Verb, "verb")] {
        let path = dir.join(format!("index.{name}"));
        if !path.exists() {
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        for (n, line) in text.lines().enumerate() {
            if line.starts_with("  ") || line.trim().is_empty() {
                continue;
            }
            let (lemma, offsets) = parse_index_line(line).map_err(|m| Error::parse(&path, n + 1, m))?;
            let ids: Vec<String> = offsets.iter().map(|o| wndb_id(o, pos)).collect();
            taxonomy.set_sense_order(&lemma, pos, &ids);
        }
    }
    Ok(taxonomy)
}

/// `offset lex_filenum ss_type w_cnt (word lex_id)* p_cnt (sym offset pos st)* ... | gloss`
fn parse_data_line(line: &str, pos: Pos) -> std::result::Result<Synset, String> {
    let body = line.split(" | ").next().unwrap_or(line);
    let mut tok = body.split_whitespace();
    let mut next = |what: &str| tok.next().ok_or_else(|| format!("truncated record: missing {what}"));

    let offset = next("offset")?.to_string();
    if offset.len() != 8 || !offset.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad synset offset `{offset}`"));
    }
    next("lex_filenum")?;
    let ss_type = next("ss_type")?;
    if ss_type != pos.tag().to_string() {
        return Err(format!("ss_type `{ss_type}` in data.{pos} file"));
    }
    let w_cnt = usize::from_str_radix(next("w_cnt")?, 16).map_err(|e| format!("bad w_cnt: {e}"))?;
    let mut lemmas: Vec<String> = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let word = next("word")?;
        next("lex_id")?;
        let word = word.split('(').next().unwrap_or(word).to_lowercase();
        if !lemmas.contains(&word) {
            lemmas.push(word);
        }
    }
    let p_cnt: usize = next("p_cnt")?.parse().map_err(|e| format!("bad p_cnt: {e}"))?;
    let mut parents = Vec::new();
    for _ in 0..p_cnt {
        let symbol = next("pointer symbol")?;
        let target = next("pointer offset")?;
        let target_pos = next("pointer pos")?;
        next("pointer source/target")?;
        if (symbol == "@" || symbol == "@i") && target_pos == pos.tag().to_string() {
            let id = wndb_id(target, pos);
            if !parents.contains(&id) {
                parents.push(id);
            }
        }
    }
    Ok(Synset {
        id: wndb_id(&offset, pos),
        pos,
        lemmas,
        parents,
    })
}

/// `lemma pos synset_cnt p_cnt ptr_symbol* sense_cnt tagsense_cnt offset*`
fn parse_index_line(line: &str) -> std::result::Result<(String, Vec<String>), String> {
    let tok: Vec<&str> = line.split_whitespace().collect();
    if tok.len() < 6 {
        return Err("truncated index record".into());
    }
    let synset_cnt: usize = tok[2].parse().map_err(|e| format!("bad synset_cnt: {e}"))?;
    let p_cnt: usize = tok[3].parse().map_err(|e| format!("bad p_cnt: {e}"))?;
    let start = 4 + p_cnt + 2;
    let offsets = tok
        .get(start..start + synset_cnt)
        .ok_or("index record shorter than its synset count")?;
    Ok((tok[0].to_lowercase(), offsets.iter().map(|s| s.to_string()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_line_maps_fields() {
        let t = parse_tsv("wv0\tn\tvehicle\t\nwv1\tn\tcar,auto\twv0\n", "inline").unwrap();
        let s = t.synset("wv1").unwrap();
        assert_eq!(s.pos, Pos::Noun);
        assert_eq!(s.lemmas, vec!["car", "auto"]);
        assert_eq!(s.parents, vec!["wv0"]);
        assert_eq!(t.synsets_for("auto", Pos::Noun), vec!["wv1"]);
    }

    #[test]
    fn tsv_comments_and_missing_parent_column() {
        let t = parse_tsv("# comment\n\nroot\tv\tmove\nwalk\tv\twalk\troot\n", "inline").unwrap();
        assert_eq!(t.synset_depth("walk").unwrap(), 3);
    }

    #[test]
    fn tsv_errors_carry_line_numbers() {
        let err = parse_tsv("a\tn\ta\n\nb\tn\n", "x.tsv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_tsv("a\tn\ta\tzzz\n", "x.tsv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_tsv("a\tq\ta\n", "x.tsv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn tsv_cycle() {
        let err = parse_tsv("a\tn\ta\tb\nb\tn\tb\ta\n", "x.tsv").unwrap_err();
        assert!(matches!(err, Error::Cycle(_)), "{err}");
    }

    const DATA_NOUN: &str = "  1 This software and database is being provided to you, the LICENSEE, by\n  2 Princeton University under the following license.\n\
00001740 03 n 01 entity 0 001 ~ 00002137 n 0000 | that which is perceived\n\
00002137 03 n 02 abstraction 0 abstract_entity 0 002 @ 00001740 n 0000 + 00012345 v 0101 | a general concept\n";

    #[test]
    fn wndb_hypernym_pointer_becomes_parent() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("data.noun"), DATA_NOUN).unwrap();
        std::fs::write(dir.path().join("data.verb"), "  1 header\n").unwrap();
        std::fs::write(
            dir.path().join("index.noun"),
            "  1 header\nentity n 1 1 ~ 1 1 00001740  \nabstraction n 1 1 @ 1 0 00002137  \n",
        )
        .unwrap();
        let t = load_taxonomy(dir.path(), TaxonomyFormat::Wndb).unwrap();
        let s = t.synset("00002137-n").unwrap();
        assert_eq!(s.parents, vec!["00001740-n"]);
        assert_eq!(s.lemmas, vec!["abstraction", "abstract_entity"]);
        assert_eq!(t.synset_depth("00002137-n").unwrap(), 3);
        assert_eq!(t.synsets_for("abstract_entity", Pos::Noun), vec!["00002137-n"]);
    }

    #[test]
    fn wndb_instance_hypernym_and_truncation() {
        let rec = "00000010 03 n 01 paris 0 001 @i 00000020 n 0000 | city";
        let s = parse_data_line(rec, Pos::Noun).unwrap();
        assert_eq!(s.parents, vec!["00000020-n"]);
        assert!(parse_data_line("00000010 03 n 02 paris 0", Pos::Noun).is_err());
        assert!(parse_data_line("00000010 03 v 01 paris 0 000 | x", Pos::Noun).is_err());
    }

    #[test]
    fn wndb_error_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("data.noun"), "  1 header\n00000001 03 n zz\n").unwrap();
        std::fs::write(dir.path().join("data.verb"), "").unwrap();
        let err = load_taxonomy(dir.path(), TaxonomyFormat::Wndb).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
