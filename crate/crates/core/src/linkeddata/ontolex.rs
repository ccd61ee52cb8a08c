use super::term::{Iri, RdfGraph};
use super::vocab;
use super::{Mapped, MappingContext};
use crate::model::LexicalEntry;

/// `<base>lexicon/<slug>/<entry-id>`.
pub fn entry_iri(ctx: &MappingContext, entry: &LexicalEntry) -> Iri {
    Iri::known(format!("{}lexicon/{}/{}", ctx.base_iri(), ctx.project_slug(), entry.id))
}

pub(crate) fn sense_iri(entry: &Iri, k: usize) -> Iri {
    Iri::known(format!("{entry}#sense-{k}"))
}

/// Senses are numbered from 1 in stored order. Unmapped parts of speech
/// are dropped with a warning.
pub fn entry_to_ontolex(entry: &LexicalEntry, ctx: &MappingContext) -> Mapped {
    let mut graph = RdfGraph::new();
    let mut warnings = Vec::new();
    let e = entry_iri(ctx, entry);
    let a = vocab::rdf_type();

    graph.add(e.clone(), &a, vocab::ontolex_lexical_entry());
    let kind = if entry.headword.chars().any(char::is_whitespace) {
        vocab::ontolex_multiword_expression()
    } else {
        vocab::ontolex_word()
    };
    graph.add(e.clone(), &a, kind);

    let form = Iri::known(format!("{e}#form"));
    graph.add(e.clone(), &vocab::ontolex_canonical_form(), form.clone());
    graph.add(form.clone(), &a, vocab::ontolex_form());
    graph.add(form, &vocab::ontolex_written_rep(), ctx.lang_literal(&entry.headword));

    if !entry.pos.is_empty() {
        match ctx.pos_iri(&entry.pos) {
            Some(pos) => graph.add(e.clone(), &vocab::lexinfo_part_of_speech(), pos.clone()),
            None => warnings.push(format!("entry {}: part of speech {:?} has no lexinfo mapping", entry.id, entry.pos)),
        }
    }

    for (i, sense) in entry.senses.iter().enumerate() {
        let s = sense_iri(&e, i + 1);
        graph.add(e.clone(), &vocab::ontolex_sense(), s.clone());
        graph.add(s.clone(), &a, vocab::ontolex_lexical_sense());
        let description = sense.description();
        if !description.is_empty() {
            graph.add(s, &vocab::skos_definition(), ctx.meta_literal(description));
        }
    }
    Mapped { graph, warnings }
}
