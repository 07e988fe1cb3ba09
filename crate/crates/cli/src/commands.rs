use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pathlet_core::codebook::{read_matrix, write_matrix};
use pathlet_core::identify::{
    evaluate_loo, evaluate_queryset, rank, render_report_text, write_report_csv, ReportRow,
};
use pathlet_core::pipeline::{document_matrix, page_pathlet_features, train_codebook_from_pool};
use pathlet_core::synth::{generate_corpus, PageLayout, SynthConfig};
use pathlet_core::{
    Codebook, CorpusManifest, DocumentDescriptor, Error, GrayImage, ManifestEntry, MatrixRecord, Metric,
    MetricChoice, Role,
};
use rayon::prelude::*;

use crate::args::{Cli, EvalMode, EvaluateArgs, FeaturizeArgs, GenerateArgs, IdentifyArgs, TrainArgs};

const MATRIX_EXT: &str = "lpsfm";

fn load_manifest(cli: &Cli, path: &Path) -> Result<CorpusManifest> {
    let path = cli.resolve(path);
    CorpusManifest::load(&path).with_context(|| format!("loading manifest {}", path.display()))
}

fn load_codebook(cli: &Cli, path: &Path) -> Result<Codebook> {
    let path = cli.resolve(path);
    Codebook::load(&path).with_context(|| format!("loading codebook {}", path.display()))
}

fn metric_for(choice: MetricChoice, codebook: &Codebook) -> Metric {
    choice.resolve(codebook.params.epsilon)
}

/// Featurizes manifest entries concurrently; output order follows input order.
fn featurize_entries(
    manifest: &CorpusManifest,
    entries: &[&ManifestEntry],
    codebook: &Codebook,
) -> Result<Vec<DocumentDescriptor>> {
    entries
        .par_iter()
        .map(|e| {
            let source = manifest.resolve(e);
            let img = GrayImage::open(&source)?;
            let matrix = document_matrix(&img, codebook).with_context(|| format!("featurizing '{}'", e.doc_id))?;
            log::debug!("{}: {} pairs", e.doc_id, matrix.pair_count());
            Ok(DocumentDescriptor {
                doc_id: e.doc_id.clone(),
                writer_id: e.writer_id.clone(),
                matrix,
                source,
            })
        })
        .collect()
}

fn read_entries(dir: &Path, entries: &[&ManifestEntry], codebook: &Codebook) -> Result<Vec<DocumentDescriptor>> {
    entries
        .par_iter()
        .map(|e| {
            let path = dir.join(format!("{}.{MATRIX_EXT}", e.doc_id));
            let rec = read_matrix(&path, codebook)?;
            if rec.writer_id != e.writer_id {
                bail!(
                    "{} records writer '{}', manifest says '{}'",
                    path.display(),
                    rec.writer_id,
                    e.writer_id
                );
            }
            Ok(DocumentDescriptor {
                doc_id: rec.doc_id,
                writer_id: rec.writer_id,
                matrix: rec.matrix,
                source: path,
            })
        })
        .collect()
}

fn matrix_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == MATRIX_EXT))
        .collect();
    files.sort();
    Ok(files)
}

pub fn generate_synthetic(cli: &Cli, a: &GenerateArgs) -> Result<()> {
    let out = cli.resolve(&a.out);
    let cfg = SynthConfig {
        layout: PageLayout {
            width: a.width,
            height: a.height,
            ..PageLayout::default()
        },
        ..SynthConfig::new(a.writers, a.docs_per_writer, a.seed)
    };
    let manifest = generate_corpus(&cfg, &out)?;
    println!(
        "wrote {} documents by {} writers to {}",
        manifest.entries.len(),
        a.writers,
        out.display()
    );
    Ok(())
}

pub fn train(cli: &Cli, a: &TrainArgs) -> Result<()> {
    let config = a.config.to_config();
    config.validate()?;
    let manifest = load_manifest(cli, &a.manifest)?;
    let entries: Vec<&ManifestEntry> = manifest.with_role(Role::Train).collect();
    if entries.is_empty() {
        return Err(Error::Config("manifest has no documents with role 'train'".into()).into());
    }
    let params = config.feature_params();
    let per_page = entries
        .par_iter()
        .map(|e| {
            let img = GrayImage::open(manifest.resolve(e))?;
            page_pathlet_features(&img, &params).with_context(|| format!("extracting pathlets of '{}'", e.doc_id))
        })
        .collect::<Result<Vec<_>>>()?;
    let pool: Vec<_> = per_page.into_iter().flatten().collect();
    log::info!("training pool: {} pathlet features from {} pages", pool.len(), entries.len());
    let codebook = train_codebook_from_pool(pool, &config)?;
    let out = cli.resolve(&a.out);
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    codebook.save(&out)?;
    println!(
        "codebook {} (M={}, D={}) written to {}",
        codebook.fingerprint(),
        codebook.size(),
        codebook.dim(),
        out.display()
    );
    Ok(())
}

pub fn featurize(cli: &Cli, a: &FeaturizeArgs) -> Result<()> {
    let manifest = load_manifest(cli, &a.manifest)?;
    let codebook = load_codebook(cli, &a.codebook)?;
    let fingerprint = codebook.fingerprint();
    let out = cli.resolve(&a.out);
    fs::create_dir_all(&out).map_err(|e| Error::Io {
        path: out.clone(),
        source: e,
    })?;
    // never mix matrices from different codebooks in one gallery
    for f in matrix_files(&out)? {
        let bytes = fs::read(&f).map_err(|e| Error::Io {
            path: f.clone(),
            source: e,
        })?;
        let rec = MatrixRecord::from_bytes(&bytes).with_context(|| format!("reading {}", f.display()))?;
        if rec.fingerprint != fingerprint {
            return Err(Error::FingerprintMismatch(format!(
                "{} holds matrices from codebook {}, refusing to add matrices from {}",
                out.display(),
                rec.fingerprint,
                fingerprint
            ))
            .into());
        }
    }
    let entries: Vec<&ManifestEntry> = manifest.entries.iter().collect();
    let docs = featurize_entries(&manifest, &entries, &codebook)?;
    for d in &docs {
        let rec = MatrixRecord {
            doc_id: d.doc_id.clone(),
            writer_id: d.writer_id.clone(),
            fingerprint,
            matrix: d.matrix.clone(),
        };
        write_matrix(out.join(format!("{}.{MATRIX_EXT}", d.doc_id)), &rec)?;
    }
    println!("wrote {} feature matrices to {}", docs.len(), out.display());
    Ok(())
}

pub fn evaluate(cli: &Cli, a: &EvaluateArgs) -> Result<()> {
    let manifest = load_manifest(cli, &a.manifest)?;
    let codebook = load_codebook(cli, &a.codebook)?;
    let metric = metric_for(a.metric.into(), &codebook);
    let load = |role: Role| -> Result<Vec<DocumentDescriptor>> {
        let entries: Vec<&ManifestEntry> = manifest.with_role(role).collect();
        if entries.is_empty() {
            return Err(Error::Config(format!("manifest has no documents with role '{role}'")).into());
        }
        match &a.matrices {
            Some(dir) => read_entries(&cli.resolve(dir), &entries, &codebook),
            None => featurize_entries(&manifest, &entries, &codebook),
        }
    };
    let table = match a.mode {
        EvalMode::Loo => evaluate_loo(&load(Role::Gallery)?, metric, &a.tops)?,
        EvalMode::Queryset => {
            let templates = load(Role::Template)?;
            let queries = load(Role::Query)?;
            let ids: HashSet<&str> = templates.iter().map(|d| d.doc_id.as_str()).collect();
            if queries.iter().any(|q| ids.contains(q.doc_id.as_str())) {
                log::warn!("some documents are both template and query; they are never matched to themselves");
            }
            evaluate_queryset(&templates, &queries, metric, &a.tops)?
        }
    };
    let dataset = a.dataset.clone().unwrap_or_else(|| {
        manifest
            .root
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into())
    });
    let rows = [ReportRow {
        dataset,
        table,
        pathlet_size: codebook.params.pathlet_size,
        level: codebook.params.level,
        codebook_size: codebook.size(),
    }];
    let out = cli.resolve(&a.out);
    fs::create_dir_all(&out).map_err(|e| Error::Io {
        path: out.clone(),
        source: e,
    })?;
    let csv_path = out.join("report.csv");
    let file = fs::File::create(&csv_path).map_err(|e| Error::Io {
        path: csv_path.clone(),
        source: e,
    })?;
    write_report_csv(file, &rows)?;
    let text = render_report_text(&rows);
    let txt_path = out.join("report.txt");
    fs::write(&txt_path, &text).map_err(|e| Error::Io {
        path: txt_path,
        source: e,
    })?;
    print!("{text}");
    println!("metric: {metric}, queries: {}", rows[0].table.queries);
    Ok(())
}

pub fn identify(cli: &Cli, a: &IdentifyArgs) -> Result<()> {
    if a.top == 0 {
        return Err(Error::Config("--top must be >= 1".into()).into());
    }
    let codebook = load_codebook(cli, &a.codebook)?;
    let metric = metric_for(a.metric.into(), &codebook);
    let gallery_dir = cli.resolve(&a.gallery);
    let gallery = matrix_files(&gallery_dir)?
        .par_iter()
        .map(|p| {
            let rec = read_matrix(p, &codebook)?;
            Ok(DocumentDescriptor {
                doc_id: rec.doc_id,
                writer_id: rec.writer_id,
                matrix: rec.matrix,
                source: p.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if gallery.is_empty() {
        return Err(Error::InsufficientData(format!("no .{MATRIX_EXT} files in {}", gallery_dir.display())).into());
    }
    let image_path = cli.resolve(&a.image);
    let img = GrayImage::open(&image_path)?;
    let query = DocumentDescriptor {
        // cannot collide with a gallery id, so nothing is excluded from the ranking
        doc_id: format!("\0query:{}", image_path.display()),
        writer_id: String::new(),
        matrix: document_matrix(&img, &codebook)?,
        source: image_path,
    };
    let ranking = rank(&query, &gallery, metric)?;
    let mut seen = HashSet::new();
    println!("rank\twriter\tdistance\tdocument");
    for (i, c) in ranking
        .candidates
        .iter()
        .filter(|c| seen.insert(c.writer_id.as_str()))
        .take(a.top)
        .enumerate()
    {
        println!("{}\t{}\t{:.6}\t{}", i + 1, c.writer_id, c.distance, c.doc_id);
    }
    Ok(())
}
