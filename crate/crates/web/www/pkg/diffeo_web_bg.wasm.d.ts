/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curverun_free: (a: number, b: number) => void;
export const __wbg_meshlevels_free: (a: number, b: number) => void;
export const curverun_iterate: (a: number, b: number) => [number, number];
export const curverun_iterations: (a: number) => number;
export const curverun_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const curverun_objectives: (a: number) => [number, number];
export const curverun_target: (a: number) => [number, number];
export const curverun_termination: (a: number) => [number, number];
export const meshlevels_count: (a: number) => number;
export const meshlevels_mesh_sizes: (a: number) => [number, number];
export const meshlevels_new: (a: number) => [number, number, number];
export const meshlevels_triangles: (a: number, b: number) => [number, number];
export const square_holonomy: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
