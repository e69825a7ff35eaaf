use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use shiftpair::newform::NewformSpec;
use shiftpair::zeros::{cache_path, fetch_zeros, parse_zero_text, FetchConfig};
use shiftpair::Error;

/// Serves `body` for paths containing `/11.a2/`, 404 otherwise. Returns the
/// base URL and a request counter.
fn serve(body: &'static str) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            counter.fetch_add(1, Ordering::SeqCst);
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request = String::new();
            reader.read_line(&mut request).unwrap();
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap() == 0 || line == "\r\n" {
                    break;
                }
            }
            let reply = if request.contains("/11.a2/") {
                format!("HTTP/1.1 200 OK\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}", body.len())
            } else {
                "HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\nConnection: close\r\n\r\n".to_string()
            };
            let _ = stream.write_all(reply.as_bytes());
        }
    });
    (format!("http://{addr}/zeros/{{label}}/{{t_max}}"), hits)
}

fn config(url: String) -> FetchConfig {
    FetchConfig {
        url_template: Some(url),
        timeout: Duration::from_secs(5),
        retries: 0,
        lock_timeout: Duration::from_secs(5),
    }
}

const BODY: &str = "6.36261389\n8.60353962\n10.0355091\n11.4512586\n13.5686048\n15.9140429\n";

#[test]
fn fetch_then_cache_hit() {
    let (url, hits) = serve(BODY);
    let dir = tempfile::tempdir().unwrap();
    let spec = NewformSpec::curve_11a2();
    let zl = fetch_zeros(&spec, 12.0, dir.path(), &config(url.clone())).unwrap();
    assert_eq!(zl.ordinates(), &[6.36261389, 8.60353962, 10.0355091, 11.4512586]);
    assert_eq!(zl.coverage(), 12.0);
    let cached = std::fs::read_to_string(cache_path(dir.path(), "11.a2", 12.0)).unwrap();
    assert!(parse_zero_text(&cached, dir.path()).unwrap().header.is_some());
    let again = fetch_zeros(&spec, 12.0, dir.path(), &config(url)).unwrap();
    assert_eq!(again.ordinates(), zl.ordinates());
    assert_eq!(hits.load(Ordering::SeqCst), 1);
}

#[test]
fn missing_label_is_not_found() {
    let (url, _) = serve(BODY);
    let dir = tempfile::tempdir().unwrap();
    let spec = NewformSpec::delta();
    assert!(matches!(fetch_zeros(&spec, 20.0, dir.path(), &config(url)), Err(Error::NotFound(_))));
}

#[test]
fn tampered_cache_detected() {
    let (url, _) = serve(BODY);
    let dir = tempfile::tempdir().unwrap();
    let spec = NewformSpec::curve_11a2();
    fetch_zeros(&spec, 12.0, dir.path(), &config(url.clone())).unwrap();
    let path = cache_path(dir.path(), "11.a2", 12.0);
    let text = std::fs::read_to_string(&path).unwrap().replace("8.60353962", "8.60353963");
    std::fs::write(&path, text).unwrap();
    assert!(matches!(fetch_zeros(&spec, 12.0, dir.path(), &config(url)), Err(Error::CacheCorrupt(_))));
}

#[test]
fn unreachable_server_is_network_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = NewformSpec::curve_11a2();
    let cfg = config("http://127.0.0.1:9/{label}".into());
    assert!(matches!(fetch_zeros(&spec, 12.0, dir.path(), &cfg), Err(Error::Network(_))));
    let none = FetchConfig { url_template: None, ..cfg };
    assert!(matches!(fetch_zeros(&spec, 12.0, dir.path(), &none), Err(Error::Network(_))));
}
