#include <stdio.h>
#include <stdlib.h>
#include "sga.h"

static const char *SCENE =
    "{\"radar\": {\"carrier_frequency_hz\": 5.4e9, \"bandwidth_hz\": 5e6, \"prf_hz\": 1350,"
    " \"sample_rate_hz\": 10e6, \"pulses\": 128, \"range_samples\": 128},"
    " \"geometry\": {\"orbit_radius_m\": 6903000, \"earth_radius_m\": 6371000,"
    " \"centre_orbit_radius_m\": 6903000, \"reference_range_m\": 597000, \"speed_mps\": 7500,"
    " \"mode\": \"stripmap\", \"acquisition_time_s\": 0.09, \"dwell_time_s\": 0.05,"
    " \"scene_range_m\": 597000},"
    " \"targets\": [{\"x_m\": 0, \"ground_offset_m\": 0}],"
    " \"grids\": {\"image_range_samples\": 256, \"scene_depth_m\": 500}}";

#define CHECK(call)                                                        \
    do {                                                                   \
        SgaStatus s_ = (call);                                             \
        if (s_ != SGA_STATUS_OK) {                                         \
            fprintf(stderr, "%s: %d %s\n", #call, s_, sga_last_error());   \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(int argc, char **argv) {
    SgaConfig *cfg = NULL;
    SgaRaster *raw = NULL, *back = NULL;
    SgaImage *img = NULL;
    SgaIrfReport rep;
    size_t n_az = 0, n_rg = 0, n = 0;

    if (argc < 2) return 2;
    CHECK(sga_config_from_json(SCENE, &cfg));
    CHECK(sga_simulate(cfg, &raw));
    CHECK(sga_raster_write(raw, argv[1]));
    CHECK(sga_raster_read(argv[1], &back));
    CHECK(sga_raster_dims(back, &n_az, &n_rg));
    CHECK(sga_focus(back, NULL, SGA_ALGO_EXTENDED, &img));
    CHECK(sga_image_analyze(img, cfg, &rep, 1, &n));
    if (n != 1 || !rep.found || rep.pslr_rg > -12.0) {
        fprintf(stderr, "unexpected report: n=%zu found=%d pslr_rg=%f\n", n, rep.found, rep.pslr_rg);
        return 1;
    }
    if (sga_config_from_json("{", &cfg) != SGA_STATUS_FORMAT) return 1;
    printf("ok %s %zux%zu pslr_rg %.2f\n", sga_version(), n_az, n_rg, rep.pslr_rg);
    sga_image_free(img);
    sga_raster_free(back);
    sga_raster_free(raw);
    sga_config_free(cfg);
    return 0;
}
