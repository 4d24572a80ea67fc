/** Small deterministic PRNG (mulberry32) so baselines reproduce exactly;
 * Math.random has no seed. */

export type Rng = () => number;

export function mulberry32(seed: number): Rng {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Uniform integer in [0, n). */
export function randomIndex(rng: Rng, n: number): number {
  if (!Number.isInteger(n) || n <= 0) {
    throw new Error(`need a positive count, got ${n}`);
  }
  return Math.floor(rng() * n);
}
