use super::term::{Iri, Literal, RdfGraph};
use super::vocab;
use super::MappingContext;
use crate::model::IgtDocument;

/// `<base>text/<slug>/<doc-id>`.
pub fn document_iri(ctx: &MappingContext, doc: &IgtDocument) -> Iri {
    Iri::known(format!("{}text/{}/{}", ctx.base_iri(), ctx.project_slug(), doc.id))
}

/// Utterances, words and morphs get positional fragment IRIs (`#u1`,
/// `#u1-w2`, `#u1-w2-m1`) and a 1-based index literal.
pub fn igt_to_ligt(doc: &IgtDocument, ctx: &MappingContext) -> RdfGraph {
    let mut g = RdfGraph::new();
    let d = document_iri(ctx, doc);
    let a = vocab::rdf_type();
    let value = vocab::rdf_value();
    let index = vocab::ligt_ext_index(ctx.base_iri());
    g.add(d.clone(), &a, vocab::ligt_document());

    for (i, utt) in doc.utterances.iter().enumerate() {
        let u = Iri::known(format!("{d}#u{}", i + 1));
        g.add(d.clone(), &vocab::ligt_has_utterances(), u.clone());
        g.add(u.clone(), &a, vocab::ligt_utterance());
        g.add(u.clone(), &index, Literal::integer(i as i64 + 1));
        g.add(u.clone(), &value, ctx.lang_literal(&utt.phrase));
        if let Some(t) = &utt.translation {
            let lit = Literal::lang(&t.text, &t.lang).unwrap_or_else(|_| Literal::simple(&t.text));
            g.add(u.clone(), &vocab::ligt_translation(), lit);
        }
        for (j, word) in utt.words.iter().enumerate() {
            let w = Iri::known(format!("{d}#u{}-w{}", i + 1, j + 1));
            g.add(u.clone(), &vocab::ligt_has_words(), w.clone());
            g.add(w.clone(), &a, vocab::ligt_word());
            g.add(w.clone(), &index, Literal::integer(j as i64 + 1));
            g.add(w.clone(), &value, ctx.lang_literal(&word.surface));
            for (k, morph) in word.morphs.iter().enumerate() {
                let m = Iri::known(format!("{d}#u{}-w{}-m{}", i + 1, j + 1, k + 1));
                g.add(w.clone(), &vocab::ligt_has_morphs(), m.clone());
                g.add(m.clone(), &a, vocab::ligt_morph());
                g.add(m.clone(), &index, Literal::integer(k as i64 + 1));
                g.add(m.clone(), &value, ctx.lang_literal(&morph.form));
                g.add(m, &vocab::ligt_gloss(), ctx.meta_literal(&morph.gloss));
            }
        }
    }
    g
}
