use std::sync::{Arc, Condvar, Mutex};

use super::manifest::{image_path, sample_id, ManifestRecord};
use super::GenConfig;
use crate::caption::{draft_offline, refine, CaptionMode, ChatClient, HttpChatClient, RequiredTokens};
use crate::catalog::Catalog;
use crate::error::SampleError;
use crate::geometry::{construct_scene, max_residual, Scene, EPS_CONSTRUCT};
use crate::instance::{check_point_flow, ClauseInstance};
use crate::render::{layout, plan_mask, plan_style, render, LaidOutScene, MaskPlan};
use crate::rng::{SampleSeed, Stage};
use crate::selector::{select_group, Complexity};

/// Salted retries per index after the first attempt.
pub const MAX_SAMPLE_RETRIES: u32 = 3;

/// Counting gate on concurrent refiner calls.
struct InFlight {
    busy: Mutex<usize>,
    freed: Condvar,
    cap: usize,
}

impl InFlight {
    fn new(cap: usize) -> Self {
        Self {
            busy: Mutex::new(0),
            freed: Condvar::new(),
            cap: cap.max(1),
        }
    }

    fn run<T>(&self, f: impl FnOnce() -> T) -> T {
        {
            let mut busy = self.busy.lock().unwrap_or_else(|e| e.into_inner());
            while *busy >= self.cap {
                busy = self.freed.wait(busy).unwrap_or_else(|e| e.into_inner());
            }
            *busy += 1;
        }
        let out = f();
        *self.busy.lock().unwrap_or_else(|e| e.into_inner()) -= 1;
        self.freed.notify_one();
        out
    }
}

/// Everything produced from one clause group.
#[derive(Debug, Clone)]
pub struct RenderedGroup {
    /// Scene-unit scene.
    pub scene: Scene,
    /// The same scene in canvas pixels.
    pub laid: LaidOutScene,
    pub mask: MaskPlan,
    pub svg: String,
    pub caption: String,
    pub caption_mode: CaptionMode,
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub record: ManifestRecord,
    pub svg: String,
    /// Failed attempts before this one succeeded.
    pub retries: u32,
}

#[derive(Debug, Clone)]
pub struct SampleFailure {
    pub index: u64,
    pub attempts: u32,
    pub error: SampleError,
}

/// Runs the select, construct, render and caption pipeline for single
/// samples. Shared by all build workers.
pub struct Generator {
    cfg: GenConfig,
    catalog: Catalog,
    client: Option<Arc<dyn ChatClient>>,
    gate: InFlight,
}

impl Generator {
    /// Uses an HTTP refiner when `cfg.refiner.enabled`.
    pub fn new(cfg: GenConfig, catalog: Catalog) -> Self {
        let client: Option<Arc<dyn ChatClient>> = if cfg.refiner.enabled {
            HttpChatClient::new(&cfg.refiner).map(|c| Arc::new(c) as Arc<dyn ChatClient>)
        } else {
            None
        };
        let gate = InFlight::new(cfg.refiner.max_in_flight);
        Self {
            cfg,
            catalog,
            client,
            gate,
        }
    }

    pub fn with_client(mut self, client: Arc<dyn ChatClient>) -> Self {
        self.client = Some(client);
        self
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// Constructs, renders and captions an explicit instance group.
    pub fn render_group(
        &self,
        instances: &[ClauseInstance],
        seed: SampleSeed,
    ) -> Result<RenderedGroup, SampleError> {
        check_point_flow(instances, &self.catalog)?;
        let scene = construct_scene(
            instances,
            &self.catalog,
            &self.cfg.thresholds,
            &mut seed.rng(Stage::Construct),
        )?;
        let residual = max_residual(instances, &self.catalog, &scene.points)?;
        if residual > EPS_CONSTRUCT {
            return Err(SampleError::ResidualTooLarge(residual));
        }
        let canvas = &self.cfg.canvas;
        let laid = layout(&scene, canvas)?;
        let style = plan_style(&laid.scene, &mut seed.rng(Stage::Style), &self.cfg.palette);
        let mask = plan_mask(&laid, &mut seed.rng(Stage::Mask), &self.cfg.mask, canvas.font_size);
        let svg = render(&laid, &style, &mask, canvas);
        let draft = draft_offline(instances, &self.catalog, &mut seed.rng(Stage::Caption))?;
        let required = RequiredTokens::for_instances(instances, &self.catalog);
        let (caption, caption_mode) = match &self.client {
            Some(c) => self
                .gate
                .run(|| refine(&draft, &required, Some(c.as_ref()), &self.cfg.refiner)),
            None => refine(&draft, &required, None, &self.cfg.refiner),
        };
        Ok(RenderedGroup {
            scene,
            laid,
            mask,
            svg,
            caption,
            caption_mode,
            max_residual: residual,
        })
    }

    /// One attempt at sample `index` with the given salt.
    pub fn attempt(&self, index: u64, complexity: Complexity, salt: u32) -> Result<Sample, SampleError> {
        let seed = SampleSeed::new(self.cfg.master_seed, index).with_salt(salt);
        let group = select_group(
            complexity,
            &self.catalog,
            &self.cfg.rules,
            &mut seed.rng(Stage::Select),
        )?;
        let out = self.render_group(&group.instances, seed)?;
        let record = ManifestRecord {
            id: sample_id(index),
            complexity,
            clauses: group.instances.iter().map(ToString::to_string).collect(),
            points: out
                .scene
                .points
                .iter()
                .map(|(k, p)| (k.clone(), [p.x, p.y]))
                .collect(),
            max_residual: out.max_residual,
            caption: out.caption,
            caption_mode: out.caption_mode.as_str().to_string(),
            image: image_path(index),
            seed: self.cfg.master_seed,
            index,
        };
        Ok(Sample {
            record,
            svg: out.svg,
            retries: salt,
        })
    }

    /// Tries salts `0..=MAX_SAMPLE_RETRIES` in order.
    pub fn generate_sample(&self, index: u64, complexity: Complexity) -> Result<Sample, SampleFailure> {
        let mut last = None;
        for salt in 0..=MAX_SAMPLE_RETRIES {
            match self.attempt(index, complexity, salt) {
                Ok(s) => return Ok(s),
                Err(e) => {
                    log::debug!("sample {index} salt {salt}: {e}");
                    last = Some(e);
                }
            }
        }
        Err(SampleFailure {
            index,
            attempts: MAX_SAMPLE_RETRIES + 1,
            error: last.expect("at least one attempt"),
        })
    }
}
