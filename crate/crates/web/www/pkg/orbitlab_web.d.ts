/* tslint:disable */
/* eslint-disable */

/**
 * `[∫_O exp(-|ξ-c|²/2w²) dω, orbit mass, 2j+1]` on the su(2) orbit of radius j+½.
 */
export function kirillov_mass(j: number, cx: number, cy: number, cz: number, w: number): Float64Array;

/**
 * `[lhs, rhs, diff, h]` for the relative character of SO(2) weight n in spin j.
 */
export function relative_character(j: number, n: number, cx: number, cy: number, cz: number, w: number): Float64Array;

/**
 * Stability of a (λ, μ) pair given as comma separated reals.
 * Returns a short human readable verdict.
 */
export function stability(lambda: string, mu: string, unitary: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly kirillov_mass: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly relative_character: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly stability: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
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
