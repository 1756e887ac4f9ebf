#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use pshscreen::catalog_io::load_catalog;
use pshscreen::core::{AreaUnit, EnergyOptions, Screener};
use serde_json::Value;
use tower::ServiceExt;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn screener(name: &str) -> Screener {
    let (catalog, _) = load_catalog(data(name), 1.0, AreaUnit::Km2).unwrap();
    Screener::new(catalog, EnergyOptions::default())
}

pub fn app(name: &str) -> Router {
    pshscreen::service::router(Arc::new(screener(name)))
}

pub struct Reply {
    pub status: StatusCode,
    pub content_type: String,
    pub disposition: Option<String>,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }
}

fn header(headers: &axum::http::HeaderMap, name: &str) -> Option<String> {
    headers.get(name).map(|v| v.to_str().unwrap().to_string())
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    let res = app
        .clone()
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let content_type = header(res.headers(), "content-type").unwrap_or_default();
    let disposition = header(res.headers(), "content-disposition");
    let status = res.status();
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply {
        status,
        content_type,
        disposition,
        body,
    }
}

/// Violations of `$defs/<def>` of the shipped API schema.
pub fn schema_errors(def: &str, doc: &Value) -> Vec<String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/api.schema.json");
    let mut schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    schema["$ref"] = Value::String(format!("#/$defs/{def}"));
    let validator = jsonschema::validator_for(&schema).unwrap();
    validator.iter_errors(doc).map(|e| e.to_string()).collect()
}

pub fn assert_schema(def: &str, doc: &Value) {
    let errors = schema_errors(def, doc);
    assert!(errors.is_empty(), "{def}: {errors:?}\n{doc}");
}
