use std::ffi::{CStr, CString};
use std::ptr;

use sga_ffi::*;

const SCENE: &str = r#"{
  "radar": {"carrier_frequency_hz": 5.4e9, "bandwidth_hz": 5e6, "prf_hz": 1350,
            "sample_rate_hz": 10e6, "pulses": 128, "range_samples": 128},
  "geometry": {"orbit_radius_m": 6903000, "earth_radius_m": 6371000,
               "centre_orbit_radius_m": 6903000, "reference_range_m": 597000,
               "speed_mps": 7500, "mode": "stripmap", "acquisition_time_s": 0.09,
               "dwell_time_s": 0.05, "scene_range_m": 597000},
  "targets": [{"x_m": 0, "ground_offset_m": 0}, {"x_m": 50, "ground_offset_m": 80}],
  "grids": {"image_range_samples": 256, "scene_depth_m": 500}
}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sga_last_error()) }.to_string_lossy().into_owned()
}

fn config(json: &str) -> *mut SgaConfig {
    let text = CString::new(json).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { sga_config_from_json(text.as_ptr(), &mut cfg) }, SgaStatus::Ok);
    cfg
}

#[test]
fn simulate_focus_analyze() {
    unsafe {
        let cfg = config(SCENE);
        let mut raw = ptr::null_mut();
        assert_eq!(sga_simulate(cfg, &mut raw), SgaStatus::Ok);
        let (mut n_az, mut n_rg) = (0, 0);
        assert_eq!(sga_raster_dims(raw, &mut n_az, &mut n_rg), SgaStatus::Ok);
        assert_eq!((n_az, n_rg), (128, 128));

        let mut buf = vec![0f32; 2 * n_az * n_rg];
        assert_eq!(sga_raster_copy_data(raw, buf.as_mut_ptr(), buf.len() - 1), SgaStatus::BufferTooSmall);
        assert!(last_error().contains("needed"));
        assert_eq!(sga_raster_copy_data(raw, buf.as_mut_ptr(), buf.len()), SgaStatus::Ok);
        assert!(buf.iter().any(|v| *v != 0.0));

        let mut img = ptr::null_mut();
        assert_eq!(sga_focus(raw, ptr::null(), SgaAlgo::Extended, &mut img), SgaStatus::Ok);
        let mut n = 0;
        assert_eq!(sga_image_analyze(img, cfg, ptr::null_mut(), 0, &mut n), SgaStatus::BufferTooSmall);
        assert_eq!(n, 2);
        let mut reps = vec![std::mem::zeroed::<SgaIrfReport>(); n];
        assert_eq!(sga_image_analyze(img, cfg, reps.as_mut_ptr(), n, &mut n), SgaStatus::Ok);
        for r in &reps {
            assert_eq!(r.found, 1);
            assert!((r.peak_x - r.expected_x).abs() < 5.0, "{r:?}");
            assert!((r.peak_y - r.expected_y).abs() < 0.5, "{r:?}");
        }

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("img").to_str().unwrap()).unwrap();
        assert_eq!(sga_image_write(img, path.as_ptr()), SgaStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(sga_raster_read(path.as_ptr(), &mut back), SgaStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(sga_image_raster(img, &mut copy), SgaStatus::Ok);
        let mut a = vec![0f32; 2 * 128 * 256];
        let mut b = a.clone();
        assert_eq!(sga_raster_copy_data(back, a.as_mut_ptr(), a.len()), SgaStatus::Ok);
        assert_eq!(sga_raster_copy_data(copy, b.as_mut_ptr(), b.len()), SgaStatus::Ok);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));

        sga_raster_free(copy);
        sga_raster_free(back);
        sga_image_free(img);
        sga_raster_free(raw);
        sga_config_free(cfg);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut cfg = ptr::null_mut();
        assert_eq!(sga_config_from_json(ptr::null(), &mut cfg), SgaStatus::InvalidArgument);
        let bad = CString::new(SCENE.replace("\"prf_hz\": 1350", "\"prf_hz\": 0")).unwrap();
        assert_eq!(sga_config_from_json(bad.as_ptr(), &mut cfg), SgaStatus::Validation);
        assert!(last_error().contains("radar.prf_hz"), "{}", last_error());
        let junk = CString::new("{").unwrap();
        assert_eq!(sga_config_from_json(junk.as_ptr(), &mut cfg), SgaStatus::Format);
        let missing = CString::new("/nonexistent/raster").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(sga_raster_read(missing.as_ptr(), &mut r), SgaStatus::Io);
        assert!(r.is_null());
        // Freeing null handles is a no-op.
        sga_config_free(ptr::null_mut());
        sga_raster_free(ptr::null_mut());
        sga_image_free(ptr::null_mut());
        let v = CStr::from_ptr(sga_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}
