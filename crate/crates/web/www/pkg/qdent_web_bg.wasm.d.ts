/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_pointview_free: (a: number, b: number) => void;
export const entropy_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const pointview_energy: (a: number) => number;
export const pointview_gap: (a: number) => number;
export const pointview_grid_points: (a: number) => number;
export const pointview_interaction_energy: (a: number) => number;
export const pointview_linear_entropy: (a: number) => number;
export const pointview_origin_density: (a: number) => number;
export const pointview_structure: (a: number) => [number, number];
export const pointview_wavefunction: (a: number) => [number, number];
export const potential_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const solve_point: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
