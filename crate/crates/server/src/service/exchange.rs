use life_core::dictionary::{compile_dictionary, Collator, DictionaryDocument};
use life_core::ingest::{
    export_csv, export_json, import_csv, import_json, parse_igt_text, parse_sfm_lexicon, serialize_sfm_lexicon, ParseWarning,
    ProjectData,
};
use life_core::linkeddata::{
    entry_to_ontolex, igt_to_ligt, link_externals, load_linkset, serialize_ntriples, serialize_turtle_with_base, LinkSet,
    MappingContext, RdfGraph,
};
use life_core::store::{Collection, StoreError};
use life_core::validate::Issue;
use life_core::{Id, IgtDocument, LexicalEntry, Project};
use serde::{Deserialize, Serialize};

use super::{decode, document, Access, Service};
use crate::error::{ApiError, ApiResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    OntolexTurtle,
    LigtTurtle,
    NTriples,
    Json,
    Csv,
    Sfm,
}

impl ExportFormat {
    pub const ALL: [ExportFormat; 6] = [
        ExportFormat::OntolexTurtle,
        ExportFormat::LigtTurtle,
        ExportFormat::NTriples,
        ExportFormat::Json,
        ExportFormat::Csv,
        ExportFormat::Sfm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExportFormat::OntolexTurtle => "ontolex-ttl",
            ExportFormat::LigtTurtle => "ligt-ttl",
            ExportFormat::NTriples => "nt",
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
            ExportFormat::Sfm => "sfm",
        }
    }

    pub fn media_type(self) -> &'static str {
        match self {
            ExportFormat::OntolexTurtle | ExportFormat::LigtTurtle => "text/turtle; charset=utf-8",
            ExportFormat::NTriples => "application/n-triples",
            ExportFormat::Json => "application/json",
            ExportFormat::Csv => "text/csv; charset=utf-8",
            ExportFormat::Sfm => "text/plain; charset=utf-8",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::OntolexTurtle | ExportFormat::LigtTurtle => "ttl",
            ExportFormat::NTriples => "nt",
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
            ExportFormat::Sfm => "sfm",
        }
    }

    pub fn parse(name: &str) -> ApiResult<ExportFormat> {
        ExportFormat::ALL.into_iter().find(|f| f.name() == name).ok_or_else(|| {
            let supported: Vec<&str> = ExportFormat::ALL.iter().map(|f| f.name()).collect();
            ApiError::new(
                axum::http::StatusCode::BAD_REQUEST,
                "unsupported_format",
                format!("unsupported export format {name:?}; supported: {} (RDF, JSON and CSV families)", supported.join(", ")),
            )
            .with("supported", supported)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportFormat {
    Sfm,
    Json,
    Csv,
    Igt,
}

impl ImportFormat {
    pub fn parse(name: &str) -> ApiResult<ImportFormat> {
        match name {
            "sfm" => Ok(ImportFormat::Sfm),
            "json" => Ok(ImportFormat::Json),
            "csv" => Ok(ImportFormat::Csv),
            "igt" => Ok(ImportFormat::Igt),
            other => Err(ApiError::new(
                axum::http::StatusCode::BAD_REQUEST,
                "unsupported_format",
                format!("unsupported import format {other:?}; supported: sfm, json, csv, igt"),
            )
            .with("supported", vec!["sfm", "json", "csv", "igt"])),
        }
    }
}

/// A record left out of an import because it failed validation.
#[derive(Clone, Debug, Serialize)]
pub struct SkippedRecord {
    pub kind: &'static str,
    pub index: usize,
    pub issues: Vec<Issue>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ImportReport {
    pub entries: usize,
    pub texts: usize,
    pub assets: usize,
    pub warnings: Vec<ParseWarning>,
    pub skipped: Vec<SkippedRecord>,
}

#[derive(Serialize, Deserialize)]
struct LinksetRecord {
    id: String,
    project_id: Id,
    csv: String,
}

fn linkset_doc_id(project: &Id) -> String {
    format!("linkset-{project}")
}

impl Service {
    pub fn mapping_context(&self, project: &Project) -> ApiResult<MappingContext> {
        Ok(MappingContext::for_project(&self.config.base_iri, project)?)
    }

    /// Entries in dictionary order: project collation, homonym number, id.
    pub fn sorted_entries(&self, project: &Project) -> ApiResult<Vec<LexicalEntry>> {
        let collator = Collator::new(&project.alphabet);
        let mut entries = self.all_entries(&project.id)?;
        entries.sort_by(|a, b| {
            collator.compare(&a.headword, &b.headword).then(a.homonym_no.cmp(&b.homonym_no)).then_with(|| a.id.cmp(&b.id))
        });
        Ok(entries)
    }

    pub fn linkset_source(&self, project: &Id) -> ApiResult<Option<String>> {
        match self.store.get(Collection::Models, &linkset_doc_id(project)) {
            Ok(s) => Ok(Some(decode::<LinksetRecord>(&s)?.csv)),
            Err(StoreError::NotFound) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn linkset(&self, project: &Id) -> ApiResult<Option<LinkSet>> {
        self.linkset_source(project)?.map(|csv| load_linkset(&csv).map_err(ApiError::from)).transpose()
    }

    /// Replaces the project's external link table; returns the number of links.
    pub fn put_linkset(&self, project: &Id, csv: &str) -> ApiResult<usize> {
        let set = load_linkset(csv)?;
        let record = LinksetRecord { id: linkset_doc_id(project), project_id: project.clone(), csv: csv.to_owned() };
        let rev = match self.store.get(Collection::Models, &record.id) {
            Ok(s) => Some(s.rev),
            Err(StoreError::NotFound) => None,
            Err(e) => return Err(e.into()),
        };
        self.store.put(Collection::Models, &document(&record)?, rev.as_deref())?;
        Ok(set.len())
    }

    pub fn lexicon_graph(&self, project: &Project) -> ApiResult<RdfGraph> {
        let ctx = self.mapping_context(project)?;
        let links = self.linkset(&project.id)?;
        let mut g = RdfGraph::new();
        for e in self.all_entries(&project.id)? {
            g.extend(entry_to_ontolex(&e, &ctx).graph);
            if let Some(l) = &links {
                g.extend(link_externals(&e, l, &ctx));
            }
        }
        Ok(g)
    }

    pub fn text_graph(&self, project: &Project) -> ApiResult<RdfGraph> {
        let ctx = self.mapping_context(project)?;
        let mut g = RdfGraph::new();
        for t in self.all_texts(&project.id)? {
            g.extend(igt_to_ligt(&t, &ctx));
        }
        Ok(g)
    }

    pub fn project_data(&self, project: &Project) -> ApiResult<ProjectData> {
        Ok(ProjectData {
            project: project.clone(),
            entries: self.all_entries(&project.id)?,
            texts: self.all_texts(&project.id)?,
            assets: self.query_docs(
                Collection::Assets,
                &life_core::store::QueryFilter::project(project.id.as_str()),
            )?,
        })
    }

    pub fn export(&self, project: &Project, format: ExportFormat) -> ApiResult<Vec<u8>> {
        let base = &self.config.base_iri;
        Ok(match format {
            ExportFormat::OntolexTurtle => serialize_turtle_with_base(&self.lexicon_graph(project)?, base).into_bytes(),
            ExportFormat::LigtTurtle => serialize_turtle_with_base(&self.text_graph(project)?, base).into_bytes(),
            ExportFormat::NTriples => {
                let mut g = self.lexicon_graph(project)?;
                g.extend(self.text_graph(project)?);
                serialize_ntriples(&g).into_bytes()
            }
            ExportFormat::Json => export_json(&self.project_data(project)?),
            ExportFormat::Csv => export_csv(&self.sorted_entries(project)?).into_bytes(),
            ExportFormat::Sfm => serialize_sfm_lexicon(&self.sorted_entries(project)?).into_bytes(),
        })
    }

    fn import_entries(&self, access: &Access, entries: Vec<LexicalEntry>, report: &mut ImportReport) -> ApiResult<()> {
        for (index, entry) in entries.into_iter().enumerate() {
            match self.insert_entry(access, entry) {
                Ok(_) => report.entries += 1,
                Err(e) if e.code == "validation_failed" => report.skipped.push(SkippedRecord {
                    kind: "entry",
                    index,
                    issues: serde_json::from_value(e.details["issues"].clone()).unwrap_or_default(),
                }),
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    fn import_texts(&self, access: &Access, texts: Vec<IgtDocument>, report: &mut ImportReport) -> ApiResult<()> {
        for (index, text) in texts.into_iter().enumerate() {
            match self.insert_text(access, text) {
                Ok(_) => report.texts += 1,
                Err(e) if e.code == "validation_failed" => report.skipped.push(SkippedRecord {
                    kind: "text",
                    index,
                    issues: serde_json::from_value(e.details["issues"].clone()).unwrap_or_default(),
                }),
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    /// Adds the parsed records to the project. Records failing validation
    /// are listed in the report rather than aborting the import.
    pub fn import(&self, access: &Access, format: ImportFormat, bytes: &[u8], title: Option<&str>) -> ApiResult<ImportReport> {
        let text = || std::str::from_utf8(bytes).map_err(|_| ApiError::unprocessable("input is not UTF-8"));
        let pid = &access.project.id;
        let mut report = ImportReport::default();
        match format {
            ImportFormat::Sfm => {
                let (entries, warnings) = parse_sfm_lexicon(text()?, pid)?;
                report.warnings = warnings;
                self.import_entries(access, entries, &mut report)?;
            }
            ImportFormat::Csv => {
                let entries = import_csv(text()?, pid)?;
                self.import_entries(access, entries, &mut report)?;
            }
            ImportFormat::Igt => {
                let (mut doc, warnings) = parse_igt_text(text()?, pid)?;
                doc.title = title.unwrap_or_default().to_owned();
                report.warnings = warnings;
                self.import_texts(access, vec![doc], &mut report)?;
            }
            ImportFormat::Json => {
                let data = import_json(bytes)?.remap_into(&access.project);
                for asset in &data.assets {
                    self.store.put(Collection::Assets, &document(asset)?, None)?;
                    report.assets += 1;
                }
                self.import_entries(access, data.entries, &mut report)?;
                self.import_texts(access, data.texts, &mut report)?;
            }
        }
        Ok(report)
    }

    pub fn dictionary(&self, project: &Project) -> ApiResult<DictionaryDocument> {
        Ok(compile_dictionary(&self.all_entries(&project.id)?, project))
    }
}

/// Export file name: `<slug>-<format>.<ext>`.
pub fn export_filename(project: &Project, format: ExportFormat) -> String {
    let stem = match format.name().split('-').next() {
        Some(f) if f != format.extension() => format!("{}-{f}", project.slug),
        _ => project.slug.clone(),
    };
    format!("{stem}.{}", format.extension())
}
