// DOM rendering for palettes, grid, and feedback. No state lives here.

import type { ElementInfo, SetInfo } from "./api.js";
import type { Placements, Selection } from "./state.js";

export interface PaletteCallbacks {
	onSelect: (selection: Selection) => void;
}

export interface GridCallbacks {
	onCellTap: (cell: number) => void;
}

function tileVisual(tile: HTMLButtonElement, info: ElementInfo): void {
	const hint = info.render_hint ?? "";
	if (hint.startsWith("color:")) {
		tile.style.background = hint.slice("color:".length);
		tile.classList.add("tile-color");
		tile.title = info.label;
		return;
	}
	// icon:<name> and shape:<name> render as labeled tiles; anything unknown
	// falls back to the element label as text.
	tile.textContent = info.label;
	tile.title = info.label;
}

export function renderPalettes(
	container: HTMLElement,
	sets: SetInfo[],
	order: Record<string, string[]>,
	selected: Selection | null,
	callbacks: PaletteCallbacks,
): void {
	container.textContent = "";
	for (const set of sets) {
		const panel = document.createElement("section");
		panel.className = "palette";
		panel.dataset.setId = set.set_id;

		const heading = document.createElement("h3");
		heading.textContent = `${set.name} (${set.size})`;
		panel.appendChild(heading);

		const tiles = document.createElement("div");
		tiles.className = "palette-tiles";
		const byId = new Map(set.elements.map((e) => [e.element_id, e]));
		const elementIds = order[set.set_id] ?? set.elements.map((e) => e.element_id);
		for (const elementId of elementIds) {
			const info = byId.get(elementId);
			if (!info) {
				continue;
			}
			const tile = document.createElement("button");
			tile.type = "button";
			tile.className = "tile";
			tile.dataset.setId = set.set_id;
			tile.dataset.elementId = elementId;
			tileVisual(tile, info);
			if (
				selected &&
				selected.setId === set.set_id &&
				selected.elementId === elementId
			) {
				tile.classList.add("selected");
			}
			tile.addEventListener("click", () =>
				callbacks.onSelect({ setId: set.set_id, elementId }),
			);
			tiles.appendChild(tile);
		}
		panel.appendChild(tiles);
		container.appendChild(panel);
	}
}

export function renderGrid(
	container: HTMLElement,
	rows: number,
	cols: number,
	placements: Placements,
	elementLookup: (selection: Selection) => ElementInfo | undefined,
	callbacks: GridCallbacks,
): void {
	container.textContent = "";
	container.style.gridTemplateColumns = `repeat(${cols}, 1fr)`;
	for (let cell = 0; cell < rows * cols; cell += 1) {
		const cellButton = document.createElement("button");
		cellButton.type = "button";
		cellButton.className = "cell";
		cellButton.dataset.cell = String(cell);
		const placed = placements.get(cell);
		if (placed) {
			cellButton.classList.add("occupied");
			cellButton.dataset.setId = placed.setId;
			cellButton.dataset.elementId = placed.elementId;
			const info = elementLookup(placed);
			if (info && info.render_hint.startsWith("color:")) {
				cellButton.style.background = info.render_hint.slice("color:".length);
				cellButton.title = info.label;
			} else {
				cellButton.textContent = info ? info.label : placed.elementId;
			}
		}
		cellButton.addEventListener("click", () => callbacks.onCellTap(cell));
		container.appendChild(cellButton);
	}
}

export type FeedbackTone = "info" | "success" | "failure";

export function renderFeedback(
	container: HTMLElement,
	tone: FeedbackTone,
	message: string,
): void {
	container.textContent = message;
	container.className = `feedback ${tone}`;
	container.dataset.tone = tone;
}

export function renderProblems(container: HTMLElement, problems: string[]): void {
	container.textContent = "";
	for (const problem of problems) {
		const item = document.createElement("li");
		item.textContent = problem;
		container.appendChild(item);
	}
}
