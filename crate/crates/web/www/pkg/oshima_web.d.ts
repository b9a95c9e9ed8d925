/* tslint:disable */
/* eslint-disable */

/**
 * The continuation of `∫|t|^s φ(t) dt` on real `s` for a unit bump of
 * half width `radius`; poles sit at negative odd integers.
 */
export function finite_part_curve(radius: number, from: number, to: number, samples: number): string;

/**
 * `2π`, so the page does not hard-code the rotation period.
 */
export function rotation_period(): number;

/**
 * Fixed points of `g = (a b; c d)` on the sphere, rescaled to determinant
 * one, with `Σ 1/|det(1 - dΦ)|`.
 */
export function sphere_fixed_points(a: number, b: number, c: number, d: number): string;

/**
 * `Tr♭π(g)` along rotations `k_θ` (`family = "elliptic"`) or along
 * `a_s = diag(e^{s/2}, e^{-s/2})` (`family = "hyperbolic"`).
 */
export function transversal_trace_curve(family: string, from: number, to: number, samples: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly finite_part_curve: (a: number, b: number, c: number, d: number) => [number, number];
    readonly rotation_period: () => number;
    readonly sphere_fixed_points: (a: number, b: number, c: number, d: number) => [number, number];
    readonly transversal_trace_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
