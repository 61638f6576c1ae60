/* tslint:disable */
/* eslint-disable */

export class PointView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `Ψ(x1, x2)` row-major, `x1` along rows.
     */
    wavefunction(): Float64Array;
    readonly energy: number;
    readonly gap: number;
    readonly grid_points: number;
    readonly interaction_energy: number;
    readonly linear_entropy: number;
    readonly origin_density: number;
    readonly structure: string;
}

/**
 * `L` at `R = r_min, r_min + step, ..., r_max`. Points whose solve fails
 * come back as NaN so the curve keeps its shape.
 */
export function entropy_curve(p: number, r_min: number, r_max: number, step: number, n_basis: number, interaction: string): Float64Array;

/**
 * `V(x)` at `points` evenly spaced positions in `[-half_width, half_width]`.
 */
export function potential_profile(r: number, p: number, half_width: number, points: number): Float64Array;

/**
 * Ground state at `(R, p)` with `Ψ` sampled on a `grid_points²` grid over
 * `[-half_width, half_width]²`.
 */
export function solve_point(r: number, p: number, n_basis: number, interaction: string, half_width: number, grid_points: number): PointView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_pointview_free: (a: number, b: number) => void;
    readonly entropy_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly pointview_energy: (a: number) => number;
    readonly pointview_gap: (a: number) => number;
    readonly pointview_grid_points: (a: number) => number;
    readonly pointview_interaction_energy: (a: number) => number;
    readonly pointview_linear_entropy: (a: number) => number;
    readonly pointview_origin_density: (a: number) => number;
    readonly pointview_structure: (a: number) => [number, number];
    readonly pointview_wavefunction: (a: number) => [number, number];
    readonly potential_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly solve_point: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
