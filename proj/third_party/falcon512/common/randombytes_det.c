/*
 * Deterministic randombytes backend for the vendored Falcon code.
 *
 * PQClean's signing and key generation pull entropy through the global
 * PQCLEAN_randombytes symbol. We replace the OS entropy source with a
 * SHAKE256-based DRBG that is reseeded explicitly by the host program,
 * so key generation and signing are reproducible for a fixed seed.
 */
#include "randombytes.h"
#include "fips202.h"

#include <string.h>

static shake256incctx drbg_state;
static int drbg_ready = 0;

void pqv2x_drbg_seed(const uint8_t *seed, size_t seed_len) {
    if (drbg_ready) {
        shake256_inc_ctx_release(&drbg_state);
    }
    shake256_inc_init(&drbg_state);
    shake256_inc_absorb(&drbg_state, (const uint8_t *)"pqv2x-drbg-v1", 13);
    shake256_inc_absorb(&drbg_state, seed, seed_len);
    shake256_inc_finalize(&drbg_state);
    drbg_ready = 1;
}

int randombytes(uint8_t *output, size_t n) {
    if (!drbg_ready) {
        /* Unseeded use is a programming error; fall back to a fixed seed
         * rather than silently producing all-zero output. */
        static const uint8_t fallback[8] = {0};
        pqv2x_drbg_seed(fallback, sizeof fallback);
    }
    shake256_inc_squeeze(output, n, &drbg_state);
    return 0;
}
