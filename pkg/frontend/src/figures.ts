/** The four figure renderers: CSV text in, standalone SVG text out. */

import { numericColumn, parseCsv, requireColumns, stringColumn,
         uniqueInOrder } from "./csv";
import { renderFigure, Series } from "./svg";

export function renderWindowFigure(csvText: string): string {
    const table = parseCsv(csvText);
    requireColumns(table, ["index", "value"]);
    const series: Series = {
        label: "",
        x: numericColumn(table, "index"),
        y: numericColumn(table, "value"),
    };
    return renderFigure({
        title: "Flat-top transmit window",
        xLabel: "sample index",
        yLabel: "amplitude",
    }, [series]);
}

export function renderTimeEffFigure(csvText: string): string {
    const table = parseCsv(csvText);
    requireColumns(table, ["system", "N", "r_T"]);
    const systems = stringColumn(table, "system");
    const n = numericColumn(table, "N");
    const r = numericColumn(table, "r_T");
    const series = uniqueInOrder(systems).map((name): Series => {
        const idx = systems.map((s, i) => (s === name ? i : -1)).filter((i) => i >= 0);
        return { label: name, x: idx.map((i) => n[i]), y: idx.map((i) => r[i]) };
    });
    return renderFigure({
        title: "Time efficiency vs burst length",
        xLabel: "symbols per burst",
        yLabel: "time efficiency",
    }, series);
}

export function renderPsdFigure(csvText: string): string {
    const table = parseCsv(csvText);
    requireColumns(table, ["system", "freq", "power_db"]);
    const systems = stringColumn(table, "system");
    const f = numericColumn(table, "freq");
    const p = numericColumn(table, "power_db");
    const series = uniqueInOrder(systems).map((name): Series => {
        const idx = systems.map((s, i) => (s === name ? i : -1)).filter((i) => i >= 0);
        return { label: name, x: idx.map((i) => f[i]), y: idx.map((i) => p[i]) };
    });
    return renderFigure({
        title: "Power spectral density (peak-normalized)",
        xLabel: "frequency (cycles/sample)",
        yLabel: "PSD (dB)",
    }, series);
}

export interface BerSeries extends Series {
    /** indices (into x/y) of zero-error points clamped to the plot floor */
    clamped: number[];
}

/** Group BER rows per system and clamp zero-error points to a floor one
 * decade below the smallest positive rate (they stay on the plot). */
export function berSeries(csvText: string): BerSeries[] {
    const table = parseCsv(csvText);
    requireColumns(table, ["system", "snr_db", "bits", "errors", "ber"]);
    const systems = stringColumn(table, "system");
    const snr = numericColumn(table, "snr_db");
    const rate = numericColumn(table, "ber");
    const positive = rate.filter((v) => v > 0);
    const floor = positive.length
        ? 10 ** (Math.floor(Math.log10(Math.min(...positive))) - 1)
        : 1e-8;
    return uniqueInOrder(systems).map((name): BerSeries => {
        const idx = systems.map((s, i) => (s === name ? i : -1)).filter((i) => i >= 0);
        const clamped: number[] = [];
        const y = idx.map((i, j) => {
            if (rate[i] > 0) return rate[i];
            clamped.push(j);
            return floor;
        });
        return { label: name, x: idx.map((i) => snr[i]), y, clamped, markers: true };
    });
}

export function renderBerFigure(csvText: string): string {
    return renderFigure({
        title: "Bit error rate vs Eb/N0",
        xLabel: "Eb/N0 (dB)",
        yLabel: "BER",
        yScale: "log",
    }, berSeries(csvText));
}

export type FigureKind = "window" | "timeeff" | "psd" | "ber";

export const RENDERERS: Record<FigureKind, (csv: string) => string> = {
    window: renderWindowFigure,
    timeeff: renderTimeEffFigure,
    psd: renderPsdFigure,
    ber: renderBerFigure,
};
