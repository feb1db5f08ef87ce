// Application wiring: mode switching, server round trips, retry-with-
// preserved-placements. Grid placements survive failed logins; only the
// palette order refreshes with each new challenge.

import { ApiClient } from "./api.js";
import type { ChallengeInfo, ElementInfo, ServiceInfo } from "./api.js";
import {
	emptyPlacements,
	placeElement,
	removeElement,
	toWire,
	validatePlacements,
} from "./state.js";
import type { Placements, PolicyRules, Selection } from "./state.js";
import {
	renderFeedback,
	renderGrid,
	renderPalettes,
	renderProblems,
} from "./render.js";

export type Mode = "register" | "login";

export interface AppHandles {
	loadPalettes(): Promise<void>;
	submit(): Promise<void>;
	setMode(mode: Mode): void;
	root: HTMLElement;
}

export function createApp(root: HTMLElement, apiBase = ""): AppHandles {
	const api = new ApiClient(apiBase);

	let mode: Mode = "register";
	let info: ServiceInfo | null = null;
	let challenge: ChallengeInfo | null = null;
	let placements: Placements = emptyPlacements();
	let selected: Selection | null = null;
	let firstRenderAt: number | null = null;
	let busy = false;

	root.innerHTML = `
		<div class="top-bar">
			<div class="mode-tabs">
				<button type="button" class="mode-tab active" data-mode="register">Register</button>
				<button type="button" class="mode-tab" data-mode="login">Log in</button>
			</div>
			<label>Username
				<input type="text" class="username" autocomplete="username">
			</label>
			<button type="button" class="load">Load palettes</button>
		</div>
		<div class="feedback info" data-tone="info">Enter a username and load the palettes.</div>
		<div class="workspace">
			<div class="palettes"></div>
			<div class="grid-pane">
				<div class="grid"></div>
				<ul class="problems"></ul>
				<button type="button" class="submit" disabled>Submit</button>
			</div>
		</div>
	`;

	const usernameInput = root.querySelector(".username") as HTMLInputElement;
	const loadButton = root.querySelector(".load") as HTMLButtonElement;
	const palettesPane = root.querySelector(".palettes") as HTMLElement;
	const gridPane = root.querySelector(".grid") as HTMLElement;
	const problemsPane = root.querySelector(".problems") as HTMLElement;
	const submitButton = root.querySelector(".submit") as HTMLButtonElement;
	const feedbackPane = root.querySelector(".feedback") as HTMLElement;

	function rules(): PolicyRules | null {
		if (!info) {
			return null;
		}
		return {
			rows: info.grid.rows,
			cols: info.grid.cols,
			kMin: info.k_min,
			kMax: info.k_max,
			setIds: info.sets.map((s) => s.set_id),
		};
	}

	function elementLookup(selection: Selection): ElementInfo | undefined {
		return info?.sets
			.find((s) => s.set_id === selection.setId)
			?.elements.find((e) => e.element_id === selection.elementId);
	}

	function paletteOrder(): Record<string, string[]> {
		if (challenge && (mode === "login" || info?.shuffle_registration_palettes)) {
			return challenge.per_set_order;
		}
		return {};
	}

	function redraw(): void {
		if (!info) {
			return;
		}
		renderPalettes(palettesPane, info.sets, paletteOrder(), selected, {
			onSelect(next) {
				selected =
					selected &&
					selected.setId === next.setId &&
					selected.elementId === next.elementId
						? null
						: next;
				redraw();
			},
		});
		renderGrid(gridPane, info.grid.rows, info.grid.cols, placements, elementLookup, {
			onCellTap(cell) {
				// Tap with a selection places (replacing any occupant); tap
				// without one clears the cell. Always recoverable.
				placements = selected
					? placeElement(placements, cell, selected)
					: removeElement(placements, cell);
				redraw();
			},
		});
		const currentRules = rules();
		if (currentRules) {
			const validation = validatePlacements(placements, currentRules);
			renderProblems(problemsPane, validation.problems);
			submitButton.disabled = busy || !validation.ok;
		}
		if (firstRenderAt === null) {
			firstRenderAt = performance.now();
		}
	}

	async function loadPalettes(): Promise<void> {
		const username = usernameInput.value.trim();
		if (!username) {
			renderFeedback(feedbackPane, "failure", "Enter a username first.");
			return;
		}
		try {
			info = info ?? (await api.fetchConfig());
			const needChallenge =
				mode === "login" || info.shuffle_registration_palettes;
			challenge = needChallenge ? await api.fetchChallenge(username) : null;
		} catch (error) {
			renderFeedback(
				feedbackPane,
				"failure",
				"Could not reach the service; check the connection and retry.",
			);
			return;
		}
		firstRenderAt = null;
		renderFeedback(
			feedbackPane,
			"info",
			mode === "register"
				? `Pick at least one element from each set and place ${info.k_min}-${info.k_max} on the grid.`
				: "Reproduce your configuration, then submit.",
		);
		redraw();
	}

	async function refreshChallenge(): Promise<void> {
		challenge = await api.fetchChallenge(usernameInput.value.trim());
		redraw(); // placements untouched; only palette order changes
	}

	async function submit(): Promise<void> {
		const currentRules = rules();
		if (!currentRules || busy) {
			return;
		}
		const validation = validatePlacements(placements, currentRules);
		if (!validation.ok) {
			return;
		}
		busy = true;
		submitButton.disabled = true;
		try {
			if (mode === "register") {
				await submitRegistration();
			} else {
				await submitLogin(true);
			}
		} finally {
			busy = false;
			redraw();
		}
	}

	async function submitRegistration(): Promise<void> {
		const result = await api.register(usernameInput.value.trim(), toWire(placements));
		switch (result.kind) {
			case "created":
				renderFeedback(
					feedbackPane,
					"success",
					"Registered. Switch to the login tab to try it out.",
				);
				break;
			case "taken":
				renderFeedback(feedbackPane, "failure", "That username is already registered.");
				break;
			case "invalid":
				renderFeedback(
					feedbackPane,
					"failure",
					`Rejected: ${result.violations.map((v) => v.message).join("; ")}`,
				);
				break;
			default:
				renderFeedback(feedbackPane, "failure", "Registration failed; try again.");
		}
	}

	async function submitLogin(retryOnBadToken: boolean): Promise<void> {
		if (!challenge) {
			await refreshChallenge();
		}
		if (!challenge) {
			return;
		}
		const elapsedSeconds =
			firstRenderAt === null ? undefined : (performance.now() - firstRenderAt) / 1000;
		const result = await api.login(
			usernameInput.value.trim(),
			challenge.token,
			toWire(placements),
			elapsedSeconds,
		);
		if (result.kind === "bad_token" && retryOnBadToken) {
			// Expired or stale token: refresh silently, keep every placement,
			// and resubmit once.
			await refreshChallenge();
			await submitLogin(false);
			return;
		}
		if (result.kind === "done" && result.success) {
			const seconds = elapsedSeconds === undefined ? "" : ` in ${elapsedSeconds.toFixed(1)} s`;
			renderFeedback(feedbackPane, "success", `Login successful${seconds}.`);
			challenge = null;
			return;
		}
		// Failure: placements stay on the grid; a fresh challenge reshuffles
		// the palettes so the user can review and adjust.
		renderFeedback(
			feedbackPane,
			"failure",
			"Login failed. Your placements are preserved; adjust and submit again.",
		);
		await refreshChallenge();
	}

	function setMode(next: Mode): void {
		mode = next;
		challenge = null;
		placements = emptyPlacements();
		selected = null;
		firstRenderAt = null;
		for (const tab of root.querySelectorAll(".mode-tab")) {
			tab.classList.toggle("active", (tab as HTMLElement).dataset.mode === next);
		}
		renderFeedback(
			feedbackPane,
			"info",
			next === "register"
				? "Enter a username and load the palettes."
				: "Enter your username and load the palettes to log in.",
		);
		palettesPane.textContent = "";
		gridPane.textContent = "";
		problemsPane.textContent = "";
		submitButton.disabled = true;
	}

	for (const tab of root.querySelectorAll(".mode-tab")) {
		tab.addEventListener("click", () =>
			setMode((tab as HTMLElement).dataset.mode as Mode),
		);
	}
	loadButton.addEventListener("click", () => void loadPalettes());
	submitButton.addEventListener("click", () => void submit());

	return { loadPalettes, submit, setMode, root };
}

// Browser bootstrap; tests drive createApp directly instead.
if (typeof document !== "undefined" && document.getElementById("app")) {
	const apiBase =
		new URLSearchParams(window.location.search).get("api") ?? "";
	createApp(document.getElementById("app") as HTMLElement, apiBase);
}
